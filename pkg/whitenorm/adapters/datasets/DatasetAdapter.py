
class DatasetAdapter:

    def get_dataset(self):
        raise NotImplementedError("DatasetAdapter.get_dataset: You should subclass this and create an adapter.")

    def describe(self) -> dict:
        raise NotImplementedError("DatasetAdapter.describe: You should subclass this and create an adapter.")
