"""Transfer protocols between a CV mode and a qubit register."""
from .cvdv import (JointState, SuccessReport, TransferOutcome, cvdv_success_probability,
                   cvdv_transfer, encode_target, predicted_cvdv_success, sample_cvdv)
from .cvstate import (SampledCVState, cv_support_radius, fock_cv_state, fock_number_state,
                      make_initial_cv, sample_cv)
from .dvcv import (DVCVTable, dvcv_success_probability, dvcv_table, dvcv_transfer,
                   dvcv_transfer_analytic, predicted_dvcv_success)

__all__ = [
    "DVCVTable", "JointState", "SampledCVState", "SuccessReport", "TransferOutcome",
    "cv_support_radius", "cvdv_success_probability", "cvdv_transfer", "dvcv_success_probability",
    "dvcv_table", "dvcv_transfer", "dvcv_transfer_analytic", "encode_target", "fock_cv_state",
    "fock_number_state", "make_initial_cv", "predicted_cvdv_success",
    "predicted_dvcv_success", "sample_cv", "sample_cvdv",
]
