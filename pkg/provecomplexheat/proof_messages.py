'''
################
Console messages for the command-line tools.

* Messages are written in the form used throughout this package:
      INFO.  Step 3 [0.005, 0.0075]: ...
      WARNING.  Step 4 failed ...
      ERROR.  Could not open the input parameter-file:
  Continuation lines are indented under the message text.
* The modules log through logging.getLogger(__name__); this module only
  installs the console handler and counts warnings for the final
  "Warning messages: n" line.

MIT License, Copyright (c) 2021-present Jim Yuill
################
'''

import logging
import sys

# Package loggers are the flat module names, so the handler goes on the root logger
_HANDLER_MARK = "_provecomplexheat_console"


class ConsoleFormatter(logging.Formatter):
    '''"LEVEL.  message", with continuation lines aligned under the text.'''

    def format(self, record):
        prefix = "%s.  " % record.levelname
        text = record.getMessage()
        if record.exc_info:
            text = text + "\n" + self.formatException(record.exc_info)
        return ("\n" + " " * len(prefix)).join((prefix + text).split("\n"))


class WarningCounter(logging.Handler):
    '''Counts WARNING records; ERROR records are counted separately.'''

    def __init__(self):
        super().__init__(level=logging.WARNING)
        self.warnings = 0
        self.errors = 0

    def emit(self, record):
        if record.levelno >= logging.ERROR:
            self.errors += 1
        else:
            self.warnings += 1


def configure_console_messages(verbose=False, stream=None):
    '''
    * Installs the console handler and a WarningCounter on the root logger.
    * Calling it again replaces the handlers it installed before.
    * Returns the WarningCounter.
    '''
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, _HANDLER_MARK, False):
            root.removeHandler(handler)

    console = logging.StreamHandler(sys.stdout if stream is None else stream)
    console.setFormatter(ConsoleFormatter())
    console.setLevel(logging.DEBUG if verbose else logging.INFO)
    counter = WarningCounter()
    for handler in (console, counter):
        setattr(handler, _HANDLER_MARK, True)
        root.addHandler(handler)
    root.setLevel(logging.DEBUG if verbose else logging.INFO)
    return counter
