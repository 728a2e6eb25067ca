from .DatasetAdapter import DatasetAdapter
from .SyntheticDatasetAdapter import SyntheticDatasetAdapter
from .IdxDatasetAdapter import IdxDatasetAdapter
from .CsvDatasetAdapter import CsvDatasetAdapter
