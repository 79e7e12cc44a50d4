from labeldist.appr.exact import exact_ppr, exact_ppr_matrix
from labeldist.appr.matrix import ApprMatrix, appr_all, appr_all_async, load_matrix, save_matrix
from labeldist.appr.push import ApprConfig, ApprVector, approximate_ppr
from labeldist.appr.service import ApprService
