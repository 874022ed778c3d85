"""Point cloud sparsification by cut pursuit."""

from ._core import (
    CapabilityError,
    ConformanceError,
    DomainError,
    Error,
    Graph,
    IoError,
    NumericalError,
    ParseError,
    SingularEdgeError,
    StepSizeError,
    add_gaussian_noise,
    cluster_filter,
    cut_pursuit,
    cut_pursuit_l0,
    debias,
    direct_sparsify,
    energy,
    energy_l0,
    knn_graph,
    make_cube_shell,
    make_grid,
    make_sphere_shell,
    octree,
    primal_dual,
    read_cloud,
    write_cloud,
)


def sparsify(points, alpha, k=8, regularizer="l0", **kwargs):
    """Build the k-NN graph of `points` and return the sparse cloud (one point per subset)."""
    graph, merged, _ = knn_graph(points, k)
    if regularizer == "l0":
        res = cut_pursuit_l0(graph, merged, alpha, **kwargs)
    else:
        res = cut_pursuit(graph, merged, alpha, **kwargs)
    return res["values"]


__all__ = [name for name in dir() if not name.startswith("_")]
