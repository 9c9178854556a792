"""Scikit-learn style front end for the partitioner."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin

from ._arrays import I64
from ._validation import as_graph
from .driver import partition
from .graph import part_weight_limit
from .refine import RefinerConfig


class JetPartitioner(BaseEstimator, ClusterMixin):
    """Balanced k-way graph partitioner with multilevel refinement.

    Fits on an adjacency structure and assigns every vertex one of
    ``n_parts`` labels such that part weights stay within
    ``(1 + imbalance) * W / n_parts`` while the total weight of edges
    between different parts is minimized.

    Parameters
    ----------
    n_parts : int
        Number of parts (k).
    imbalance : float, default=0.03
        Allowed part weight slack above the ideal W/k.
    seed : int, default=0
        Seed for all randomized choices.
    phi : float, default=0.999
        Improvement tolerance; a new best cut must drop below
        phi * previous_best to reset the refinement stop counter.
    no_improve_limit : int, default=12
        Refinement iterations tolerated without significant improvement.
    coarse_target : int, default=200
        Stop coarsening near this vertex count.
    c_finest, c_other : float
        Gain-ratio filter constants for the finest and coarser levels.
    sub_buckets : int, default=32
        Sub-buckets per loss bucket during rebalancing.
    deadzone_fraction : float, default=0.1
        Fraction of the balance slack reserved as the rebalancing
        deadzone.
    restarts : int, default=8
        Restarts of the initial partitioner on the coarsest graph.
    deterministic : bool, default=True
        Echoed into reports; this implementation is deterministic for a
        fixed seed either way.

    Attributes
    ----------
    labels_ : ndarray of shape (n_vertices,)
        Part id per vertex of X.
    cut_ : int
        Total weight of edges joining different parts.
    imbalance_ : float
        Maximum part weight divided by the ideal part weight.
    balanced_ : bool
        Whether the balance constraint is met.
    n_levels_ : int
        Hierarchy depth used.
    report_ : dict
        Detailed per-level metrics.

    Examples
    --------
    >>> import numpy as np
    >>> from jetpart import JetPartitioner
    >>> ring = np.zeros((6, 6), dtype=int)
    >>> for i in range(6):
    ...     ring[i, (i + 1) % 6] = 1
    >>> labels = JetPartitioner(n_parts=2, seed=1).fit_predict(ring)
    >>> int((labels == labels[0]).sum())
    3
    """

    def __init__(self, n_parts=2, imbalance=0.03, seed=0, phi=0.999,
                 no_improve_limit=12, coarse_target=200, c_finest=0.25,
                 c_other=0.75, sub_buckets=32, deadzone_fraction=0.1,
                 restarts=8, deterministic=True):
        self.n_parts = n_parts
        self.imbalance = imbalance
        self.seed = seed
        self.phi = phi
        self.no_improve_limit = no_improve_limit
        self.coarse_target = coarse_target
        self.c_finest = c_finest
        self.c_other = c_other
        self.sub_buckets = sub_buckets
        self.deadzone_fraction = deadzone_fraction
        self.restarts = restarts
        self.deterministic = deterministic

    def _config(self) -> RefinerConfig:
        return RefinerConfig(
            k=self.n_parts,
            imbalance=self.imbalance,
            seed=self.seed,
            phi=self.phi,
            no_improve_limit=self.no_improve_limit,
            coarse_target=self.coarse_target,
            c_finest=self.c_finest,
            c_other=self.c_other,
            sub_buckets=self.sub_buckets,
            deadzone_fraction=self.deadzone_fraction,
            restarts=self.restarts,
            deterministic=self.deterministic,
        )

    def fit(self, X, y=None):
        """Partition the graph described by X.

        X may be a jetpart Graph, a scipy sparse adjacency matrix, or a
        dense square array. Vertices outside the largest connected
        component are assigned afterwards, one whole component at a
        time, to the currently lightest part.
        """
        del y
        graph, mapping, n_original = as_graph(X)
        result = partition(graph, self._config())

        labels = np.full(n_original, -1, dtype=I64)
        kept = mapping >= 0
        labels[kept] = result.state.parts[mapping[kept]]
        weights = result.state.part_weights.copy()
        if not kept.all():
            labels = _attach_leftovers(X, labels, weights)

        self.labels_ = labels
        self.cut_ = result.state.cutsize
        self.part_weights_ = weights
        total = int(weights.sum())
        limit = part_weight_limit(total, self.n_parts, self.imbalance)
        self.balanced_ = bool(np.all(weights <= limit))
        self.imbalance_ = float(weights.max()) * self.n_parts / total
        self.n_levels_ = result.metrics["n_levels"]
        self.report_ = result.metrics
        return self

    def fit_predict(self, X, y=None):
        """Fit and return the per-vertex part labels."""
        return self.fit(X).labels_


def _attach_leftovers(X, labels, weights):
    """Assign vertices outside the main component, keeping each of their
    components whole and feeding the lightest part first."""
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import connected_components

    from ._validation import edges_from_matrix

    rows, cols, w, n = edges_from_matrix(X)
    adj = csr_matrix((w, (rows, cols)), shape=(n, n))
    _, comp = connected_components(adj, directed=False)
    missing = np.flatnonzero(labels < 0)
    comp_ids, inverse = np.unique(comp[missing], return_inverse=True)
    comp_weight = np.bincount(inverse, minlength=len(comp_ids))
    for c in np.argsort(-comp_weight, kind="stable"):
        members = missing[inverse == c]
        target = int(np.argmin(weights))
        labels[members] = target
        weights[target] += len(members)
    return labels
