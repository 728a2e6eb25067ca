from ...datasets import gen_correlated_gaussians
from .DatasetAdapter import DatasetAdapter


class SyntheticDatasetAdapter(DatasetAdapter):
    """Correlated Gaussian classes, regenerated identically from the seed on every call."""

    def __init__(self, d: int, n: int, num_classes: int = 2, correlation: float = None,
                 separation: float = None, seed: int = None):
        self.d = d
        self.n = n
        self.num_classes = num_classes
        self.correlation = 0.0 if correlation is None else correlation
        self.separation = 1.0 if separation is None else separation
        self.seed = 0 if seed is None else seed

    def get_dataset(self):
        return gen_correlated_gaussians(self.d, self.n, self.num_classes, self.correlation,
                                        self.separation, self.seed)

    def describe(self):
        return {'source': 'synthetic', 'd': self.d, 'n': self.n, 'num_classes': self.num_classes,
                'correlation': self.correlation, 'separation': self.separation, 'seed': self.seed}
