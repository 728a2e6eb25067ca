
class RunAdapter():

    def put_rows(self, name: str, rows, columns=None):
        raise NotImplementedError("RunAdapter.put_rows: subclass me!")

    def put_metrics(self, name: str, log):
        raise NotImplementedError("RunAdapter.put_metrics: subclass me!")

    def put_report(self, name: str, report: dict):
        raise NotImplementedError("RunAdapter.put_report: subclass me!")

    def get_report(self, name: str) -> dict:
        raise NotImplementedError("RunAdapter.get_report: subclass me!")

    def put_model(self, name: str, model):
        raise NotImplementedError("RunAdapter.put_model: subclass me!")

    def get_model(self, name: str):
        raise NotImplementedError("RunAdapter.get_model: subclass me!")
