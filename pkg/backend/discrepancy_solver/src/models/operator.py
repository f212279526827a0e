"""Finite-dimensional vectors and linear operators.

Vectors are read-only float64 numpy arrays. A `LinearOperator` wraps one of
three representations (dense matrix, diagonal spectrum, circular convolution
kernel) and exposes forward and adjoint application plus a cached SVD.
"""
import logging
from collections import namedtuple
from functools import cached_property

import numpy as np
import scipy.linalg

from src.models.errors import RejectedInputError, UnsupportedOperationError

logger = logging.getLogger(__name__)

DENSE = 'dense'
DIAGONAL = 'diagonal'
CONVOLUTION = 'convolution'
REPRESENTATIONS = (DENSE, DIAGONAL, CONVOLUTION)

SingularSystem = namedtuple('SingularSystem', ['values', 'left', 'right'])


def as_vector(values, name='vector'):
    """Validate and freeze `values` as a 1-D finite float64 array."""
    arr = np.array(values, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1 or arr.size == 0:
        raise RejectedInputError(f'{name} must be a non-empty 1-D sequence, got shape {arr.shape}')
    if not np.all(np.isfinite(arr)):
        raise RejectedInputError(f'{name} contains NaN or Inf entries')
    arr.setflags(write=False)
    return arr


def inner(u, v):
    return float(np.dot(u, v))


def norm(u):
    return float(np.linalg.norm(u))


class LinearOperator:
    """Immutable operator A: R^cols -> R^rows."""

    def __init__(self, representation, data):
        if representation not in REPRESENTATIONS:
            raise RejectedInputError(
                f'Unknown representation {representation!r}; expected one of {REPRESENTATIONS}'
            )
        data = np.array(data, dtype=np.float64)
        if not np.all(np.isfinite(data)):
            raise RejectedInputError('Operator data contains NaN or Inf entries')

        if representation == DENSE:
            if data.ndim != 2 or data.size == 0:
                raise RejectedInputError(f'Dense operator needs a non-empty 2-D matrix, got shape {data.shape}')
            self.rows, self.cols = data.shape
        else:
            if data.ndim != 1 or data.size == 0:
                raise RejectedInputError(f'{representation} operator needs a non-empty 1-D array, got shape {data.shape}')
            self.rows = self.cols = data.size

        data.setflags(write=False)
        self.representation = representation
        self.data = data

    @classmethod
    def dense(cls, matrix):
        return cls(DENSE, matrix)

    @classmethod
    def diagonal(cls, spectrum):
        return cls(DIAGONAL, spectrum)

    @classmethod
    def convolution(cls, kernel):
        """Circular convolution (Au)_i = sum_j k[(i - j) mod n] u_j."""
        return cls(CONVOLUTION, kernel)

    def __repr__(self):
        return f'<LinearOperator {self.representation} {self.rows}x{self.cols}>'

    @cached_property
    def _circulant(self):
        matrix = scipy.linalg.circulant(self.data)
        matrix.setflags(write=False)
        return matrix

    def apply(self, u):
        u = as_vector(u, 'u')
        if u.size != self.cols:
            raise RejectedInputError(f'Dimension mismatch: operator has {self.cols} columns, vector has {u.size} entries')
        if self.representation == DIAGONAL:
            out = self.data * u
        elif self.representation == CONVOLUTION:
            out = self._circulant @ u
        else:
            out = self.data @ u
        return as_vector(out, 'Au')

    def apply_adjoint(self, v):
        v = as_vector(v, 'v')
        if v.size != self.rows:
            raise RejectedInputError(f'Dimension mismatch: operator has {self.rows} rows, vector has {v.size} entries')
        if self.representation == DIAGONAL:
            out = self.data * v
        elif self.representation == CONVOLUTION:
            # circular correlation with the kernel
            out = self._circulant.T @ v
        else:
            out = self.data.T @ v
        return as_vector(out, 'A*v')

    def to_matrix(self):
        if self.representation == DIAGONAL:
            return np.diag(self.data)
        if self.representation == CONVOLUTION:
            return np.array(self._circulant)
        return np.array(self.data)

    @cached_property
    def _dense_twin(self):
        if self.representation == DENSE:
            return self
        return LinearOperator.dense(self.to_matrix())

    def densify(self):
        """Dense operator with the same action; cached on this handle."""
        return self._dense_twin

    @cached_property
    def _singular_system(self):
        if self.representation == DIAGONAL:
            magnitude = np.abs(self.data)
            order = np.argsort(-magnitude, kind='stable')
            signs = np.where(self.data[order] < 0, -1.0, 1.0)
            eye = np.eye(self.rows)
            right = eye[:, order]
            system = SingularSystem(magnitude[order], right * signs, right)
        else:
            left, values, right_t = scipy.linalg.svd(self.data, full_matrices=False)
            system = SingularSystem(values, left, right_t.T)
        for arr in system:
            arr.setflags(write=False)
        logger.debug('Computed SVD of %r (sigma_max=%.3e)', self, system.values[0])
        return system

    def svd(self):
        if self.representation == CONVOLUTION:
            raise UnsupportedOperationError('SVD of a convolution operator is not supported; call densify() first')
        return self._singular_system

    @property
    def sigma_max(self):
        return float(self.densify().svd().values[0])

    @property
    def sigma_min(self):
        return float(self.densify().svd().values[-1])


def apply(op, u):
    return op.apply(u)


def apply_adjoint(op, v):
    return op.apply_adjoint(v)


def svd(op):
    """(singular_values, left_basis, right_basis) with nonincreasing values."""
    return op.svd()
