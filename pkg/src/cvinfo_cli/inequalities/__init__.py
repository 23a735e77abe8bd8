from __future__ import annotations

from .regions import (
    CSV_HEADER,
    GridSpec,
    RegionPoint,
    nesting_violations,
    region_point,
    scan_region,
    three_mode_region_member,
    write_region_csv,
)
from .residuals import (
    HierarchyChain,
    TripartiteResiduals,
    conditional_concavity_slack,
    hierarchy_check,
    logdet_concavity_slack,
    ssa_conditional_residual,
    ssa_logdet_residual,
    subadditivity_residual,
    triangle_residuals,
    tripartite_residuals,
    vn_ssa_conditional_residual,
    vn_ssa_residual,
)

__all__ = [
    "CSV_HEADER",
    "GridSpec",
    "RegionPoint",
    "nesting_violations",
    "region_point",
    "scan_region",
    "three_mode_region_member",
    "write_region_csv",
    "HierarchyChain",
    "TripartiteResiduals",
    "conditional_concavity_slack",
    "hierarchy_check",
    "logdet_concavity_slack",
    "ssa_conditional_residual",
    "ssa_logdet_residual",
    "subadditivity_residual",
    "triangle_residuals",
    "tripartite_residuals",
    "vn_ssa_conditional_residual",
    "vn_ssa_residual",
]
