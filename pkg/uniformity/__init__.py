# cstarnet uniformity package: pseudo-metrics d_{X,Φ}, ε-nets and witnesses

from .directsum import TransferredNet, combine_nets, directsum_net_transfer, project_spec
from .metric import (
    PseudoMetricSpec,
    block_seminorm,
    distance_matrix,
    pseudo_metric,
    separation_witness,
)
from .nets import (
    NET_FOUND,
    SEPARATED_FAMILY,
    NetReport,
    ProbeVerdict,
    SeparatedFamily,
    center_escape_count,
    epsilon_net,
    greedy_centers,
    nearest_center_distances,
    total_boundedness_probe,
    verify_net,
    verify_separated,
)
from .resolvent_net import regularizer, resolvent_net, tail_cutoff
from .witness import WitnessResult, noncompactness_witness, operator_witness

__all__ = [
    "NET_FOUND",
    "SEPARATED_FAMILY",
    "NetReport",
    "ProbeVerdict",
    "PseudoMetricSpec",
    "SeparatedFamily",
    "TransferredNet",
    "WitnessResult",
    "block_seminorm",
    "center_escape_count",
    "combine_nets",
    "directsum_net_transfer",
    "distance_matrix",
    "epsilon_net",
    "greedy_centers",
    "nearest_center_distances",
    "noncompactness_witness",
    "operator_witness",
    "project_spec",
    "pseudo_metric",
    "regularizer",
    "resolvent_net",
    "separation_witness",
    "tail_cutoff",
    "total_boundedness_probe",
    "verify_net",
    "verify_separated",
]
