from django.dispatch import Signal

# Sent with the finished SuiteRun as ``run``
suite_finished = Signal()
