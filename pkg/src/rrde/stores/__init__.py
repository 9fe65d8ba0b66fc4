from .report_store import ReportStore, TableStore

__all__ = ["ReportStore", "TableStore"]
