from .RunAdapter import RunAdapter
from .LocalFileSystemRunAdapter import LocalFileSystemRunAdapter, dumps_report, to_json_safe
