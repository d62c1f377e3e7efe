"""Unitary 2-D discrete Fourier transform.

Forward convention: u_hat(w) = (MN)^(-1/2) * sum_i u(i) exp(-2*pi*1j*<w, i/dims>).
The unitary scaling keeps energies comparable between the pixel and
frequency domains, which the frequency regularizer relies on.
"""

import numpy as np

from .raster import as_raster


def dft2(u):
    """Unitary forward transform of a real raster."""
    return np.fft.fft2(as_raster(u), norm="ortho")


def idft2(spectrum):
    """Unitary inverse transform; complex output."""
    spectrum = np.asarray(spectrum, dtype=np.complex128)
    if spectrum.ndim != 2:
        raise ValueError(f"spectrum must be 2-D, got shape {spectrum.shape}")
    return np.fft.ifft2(spectrum, norm="ortho")


def idft2_real(spectrum):
    """Real part of the unitary inverse transform.

    For spectra assembled from weighted bin differences the imaginary
    residue is what the real-part projection is meant to discard; for a
    spectrum of a real raster it is zero to rounding.
    """
    return np.ascontiguousarray(idft2(spectrum).real)
