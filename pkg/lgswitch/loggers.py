import logging
import time


class FormLoggerMixin(object):
    """Mixin for django forms that provide logging information for events like
    successfull/failed validation."""

    @property
    def logger(self):
        name = '.'.join([
            self.__module__,
            self.__class__.__name__
        ])
        return logging.getLogger(name)


    def is_valid(self) -> bool:
        if super().is_valid():
            self.logger.info("Form successfully cleaned.")
            self.logger.debug(f"Form cleaned data: {self.cleaned_data}")
            return True

        if self.errors:
            self.logger.warning(self.errors.as_data())
        else:
            self.logger.info("Form has errors (or is unbound).")
        return False


class CommandLoggerMixin(object):
    """Mixin for management commands that provides a logger named after the command
    and logs the start and the wall time of every run."""

    @property
    def logger(self):
        name = '.'.join([
            self.__module__,
            self.__class__.__name__
        ])
        return logging.getLogger(name)

    def execute(self, *args, **options):
        command = self.__module__.split('.')[-1]
        self.logger.info(f"Running {command} with {options}")
        start_time = time.perf_counter()
        try:
            return super().execute(*args, **options)
        finally:
            end_time = time.perf_counter()
            self.logger.info(f"{command} took {end_time - start_time:.2f} seconds")
