import pandas as pd

from ...datasets import Dataset
from ...errors import InvalidDatasetError
from .DatasetAdapter import DatasetAdapter


class CsvDatasetAdapter(DatasetAdapter):
    """One example per row, a header row, class ids in the column named `label`, every other column a feature."""

    def __init__(self, path: str, label_column: str = None, num_classes: int = None):
        self.path = path
        self.label_column = label_column or 'label'
        self.num_classes = num_classes

    def get_dataset(self):
        frame = pd.read_csv(self.path)
        if self.label_column not in frame.columns:
            raise InvalidDatasetError('CsvDatasetAdapter: {} has no "{}" column'.format(self.path, self.label_column))

        labels = frame[self.label_column].to_numpy()
        features = frame.drop(columns=[self.label_column])
        try:
            features = features.astype('float64').to_numpy().T
        except ValueError as e:
            raise InvalidDatasetError('CsvDatasetAdapter: {} has non-numeric features: {}'.format(self.path, e))
        if features.shape[0] == 0:
            raise InvalidDatasetError('CsvDatasetAdapter: {} has no feature columns'.format(self.path))

        num_classes = self.num_classes if self.num_classes is not None else int(labels.max()) + 1
        return Dataset(features, labels, num_classes)

    def describe(self):
        return {'source': 'csv', 'path': str(self.path), 'label_column': self.label_column}
