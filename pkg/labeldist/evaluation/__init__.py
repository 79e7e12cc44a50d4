from labeldist.evaluation.metrics import accuracy, macro_f1, micro_f1
from labeldist.evaluation.report import EvalReport, ReportRow, select_alpha, summarize, write_summary
