#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Rotation helpers on SO(3)"""
from __future__ import annotations

import numpy as np
from scipy.spatial.transform import Rotation

__license__ = "MIT"

E3 = np.array([0.0, 0.0, 1.0])


def rot_x(angle: float) -> np.ndarray:
    """Canonical rotation about x"""
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_z(angle: float) -> np.ndarray:
    """Canonical rotation about z"""
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def hat(vec: np.ndarray) -> np.ndarray:
    """Skew-symmetric matrix such that hat(a) @ b == cross(a, b)"""
    x, y, z = vec
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def vee(mat: np.ndarray) -> np.ndarray:
    """Inverse of hat, reading the skew part of a 3x3 matrix

    Examples:
        >>> vee(hat(np.array([1.0, 2.0, 3.0]))).tolist()
        [1.0, 2.0, 3.0]
    """
    return np.array([mat[2, 1], mat[0, 2], mat[1, 0]])


def so3_exp(rotvec: np.ndarray) -> np.ndarray:
    """Exponential map of a rotation vector (Rodrigues' formula)"""
    theta = float(np.linalg.norm(rotvec))
    skew = hat(rotvec)
    if theta < 1e-8:
        # second-order series keeps the map accurate near identity
        return np.eye(3) + skew + 0.5 * skew @ skew
    return (
        np.eye(3)
        + (np.sin(theta) / theta) * skew
        + ((1.0 - np.cos(theta)) / theta**2) * skew @ skew
    )


def orthonormalize(mat: np.ndarray) -> np.ndarray:
    """Project a near-rotation onto SO(3) via its polar decomposition"""
    u_mat, _, vt_mat = np.linalg.svd(mat)
    rot = u_mat @ vt_mat
    if np.linalg.det(rot) < 0:
        u_mat[:, -1] *= -1
        rot = u_mat @ vt_mat
    return rot


def orthogonality_error(mat: np.ndarray) -> float:
    """Largest entry of |R^T R - I|"""
    return float(np.max(np.abs(mat.T @ mat - np.eye(3))))


def to_quaternion(mat: np.ndarray) -> np.ndarray:
    """Unit quaternion (w, x, y, z) with nonnegative w

    Examples:
        >>> to_quaternion(np.eye(3)).tolist()
        [1.0, 0.0, 0.0, 0.0]
    """
    x, y, z, w = Rotation.from_matrix(mat).as_quat()
    quat = np.array([w, x, y, z])
    if quat[0] < 0:
        quat = -quat
    return quat + 0.0


def from_quaternion(quat: np.ndarray) -> np.ndarray:
    """Rotation matrix from a (w, x, y, z) quaternion"""
    w, x, y, z = quat
    return Rotation.from_quat([x, y, z, w]).as_matrix()
