import logging

import numpy as np

from ...datasets import Dataset, subset
from ...errors import InvalidDatasetError
from ...logic.read_idx import read_idx
from .DatasetAdapter import DatasetAdapter

logger = logging.getLogger(__name__)


class IdxDatasetAdapter(DatasetAdapter):
    """
    An image file and a label file in IDX format, e.g. MNIST's train-images-idx3-ubyte and
    train-labels-idx1-ubyte. Images are flattened to rows * cols features.
    """

    def __init__(self, images_path: str, labels_path: str, limit: int = None, num_classes: int = None,
                 seed: int = None):
        self.images_path = images_path
        self.labels_path = labels_path
        self.limit = limit
        self.num_classes = num_classes
        self.seed = 0 if seed is None else seed

    def get_dataset(self):
        images = read_idx(self.images_path)
        labels = read_idx(self.labels_path)
        if images.ndim < 2 or labels.ndim != 1:
            raise InvalidDatasetError('IdxDatasetAdapter: expected an image tensor and a label vector, '
                                      'got shapes {} and {}'.format(images.shape, labels.shape))
        if images.shape[0] != labels.shape[0]:
            raise InvalidDatasetError('IdxDatasetAdapter: {} images but {} labels'.format(
                images.shape[0], labels.shape[0]))

        features = images.reshape(images.shape[0], -1).T
        num_classes = self.num_classes if self.num_classes is not None else int(np.max(labels)) + 1
        dataset = subset(Dataset(features, labels, num_classes), self.limit, seed=self.seed)
        logger.info('IdxDatasetAdapter: %d examples, %d features, %d classes', dataset.size, dataset.dim, num_classes)
        return dataset

    def describe(self):
        return {'source': 'idx', 'images': str(self.images_path), 'labels': str(self.labels_path),
                'limit': self.limit, 'seed': self.seed}
