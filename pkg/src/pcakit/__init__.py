"""Principal component analysis from a symmetric eigensolver up.

Data matrices are variables x samples. The main entry points are
:func:`fit`, :func:`project`, :func:`reconstruct` and :func:`spectral_ratio`.
"""
from .analysis import (
    BiplotData,
    Clustering,
    best_fit_line,
    biplot_data,
    cluster_representative,
    kmeans,
    matched_accuracy,
    write_biplot,
)
from .dataio import Dataset, embedded_height_weight, embedded_iris, load_csv, save_csv
from .errors import PcaError
from .linalg import EigenDecomposition, matmul, spectral_reconstruct, symmetric_eigen, transpose
from .pca import PcaModel, Scores, center, covariance, fit, mean_vector, project, reconstruct, spectral_ratio
from .pgm import GrayImage, load_pgm, save_pgm
from .spikes import synthesize_spikes

__version__ = "0.1.0"
