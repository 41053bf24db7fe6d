"""Euler form and Coxeter transformation of an acyclic quiver.

Dimension vectors are column vectors indexed by vertex position. With
``E = I - A`` (``A`` the arrow-count matrix) the Euler form is
``<x, y> = x^T E y``, projective dimension vectors are the columns of
``E^{-T}``, injective ones the columns of ``E^{-1}``, and the Coxeter matrix
``Phi = -E^{-1} E^T`` sends ``dim P(i)`` to ``-dim I(i)`` and
``dim M`` to ``dim tau M`` for indecomposable non-projective ``M``.
All matrices are exact integers.
"""

from __future__ import annotations

import numpy as np

from .quiver import ClusterQuiver


def euler_matrix(arrows: np.ndarray) -> np.ndarray:
    A = np.asarray(arrows, dtype=np.int64)
    return np.eye(A.shape[0], dtype=np.int64) - A


def euler_form_matrix(arrows: np.ndarray, dx, dy) -> int:
    return int(np.asarray(dx, dtype=np.int64) @ euler_matrix(arrows) @ np.asarray(dy, dtype=np.int64))


def unipotent_inverse(E: np.ndarray) -> np.ndarray:
    """Inverse of ``I - N`` for nilpotent ``N``: the finite sum of powers of ``N``."""
    n = E.shape[0]
    N = np.eye(n, dtype=np.int64) - E
    out = np.eye(n, dtype=np.int64)
    term = np.eye(n, dtype=np.int64)
    for _ in range(n):
        term = term @ N
        if not term.any():
            break
        out = out + term
    if (E @ out != np.eye(n, dtype=np.int64)).any():
        raise ValueError("quiver is not acyclic")
    return out


def coxeter_matrix(arrows: np.ndarray) -> np.ndarray:
    E = euler_matrix(arrows)
    return -unipotent_inverse(E) @ E.T


def inverse_coxeter_matrix(arrows: np.ndarray) -> np.ndarray:
    E = euler_matrix(arrows)
    return -unipotent_inverse(E).T @ E


def projective_dims(arrows: np.ndarray) -> np.ndarray:
    """Column ``i`` is ``dim P(i)``: path counts out of vertex ``i``."""
    return unipotent_inverse(euler_matrix(arrows)).T


def injective_dims(arrows: np.ndarray) -> np.ndarray:
    return unipotent_inverse(euler_matrix(arrows))


def preprojective_dim(Q: ClusterQuiver, label: int, r: int) -> np.ndarray | None:
    """``dim tau^{-r} P(label)`` by iterating the inverse Coxeter matrix, or
    ``None`` once an iterate stops being a positive vector (the previous
    module was injective)."""
    Pinv = inverse_coxeter_matrix(Q.arrows)
    d = projective_dims(Q.arrows)[:, Q.index(label)].copy()
    for _ in range(r):
        d = Pinv @ d
        if (d < 0).any() or not d.any():
            return None
    return d
