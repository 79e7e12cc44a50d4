import asyncio
import logging
import sys

from labeldist.commands.set_commands import build_parser
from labeldist.handlers import dispatch


async def main(argv=None) -> int:

    logging.basicConfig(
        level=logging.INFO,
        format="%(asctime)s - %(levelname)s - %(name)s - %(message)s",
    )

    args = build_parser().parse_args(argv)
    return await dispatch(args)


if __name__ == "__main__":
    sys.exit(asyncio.run(main()))
