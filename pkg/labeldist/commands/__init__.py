from labeldist.commands.set_commands import COMMANDS, build_parser
