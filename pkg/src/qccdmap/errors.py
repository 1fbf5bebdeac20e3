"""Exception types shared across the toolchain.

Each error class carries the process exit code the CLI maps it to.
"""
from __future__ import annotations


class QccdError(Exception):
    """Base class for all toolchain errors."""

    exit_code = 1


class InputError(QccdError):
    """Malformed or infeasible input: circuit text, device config, CLI args."""

    exit_code = 1


class DeviceOpError(QccdError):
    """A physical operation whose preconditions do not hold on the device state."""

    exit_code = 1


class DeadlockError(QccdError):
    """Routing could not free space for a required shuttle."""

    exit_code = 2

    def __init__(self, message: str, occupancy: tuple[int, ...] = ()):
        super().__init__(message)
        self.occupancy = tuple(occupancy)

    def __str__(self) -> str:
        base = super().__str__()
        if self.occupancy:
            return f"{base} (trap occupancy: {list(self.occupancy)})"
        return base


class VerificationError(QccdError):
    """A produced schedule failed independent replay verification."""

    exit_code = 3
