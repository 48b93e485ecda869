from __future__ import print_function

import hashlib
import logging
import os
import sys
import tempfile


def abort(msg, exitcode=1):
    print(msg, file=sys.stderr)
    sys.exit(exitcode)


def standard_logger(name, debug):
    if not debug:
        return logging.getLogger(name)

    return debug_logger(name)


def debug_logger(name):
    log_format = '%(asctime)-15s %(levelname)-6s %(message)s'
    date_format = '%b %d %H:%M:%S'
    formatter = logging.Formatter(fmt=log_format, datefmt=date_format)
    logger = logging.getLogger(name)
    logger.setLevel(logging.DEBUG)
    # Trainers are built repeatedly during community-count selection
    if not logger.handlers:
        handler = logging.StreamHandler(stream=sys.stdout)
        handler.setFormatter(formatter)
        logger.addHandler(handler)
    return logger


def file_sha256(path):
    digest = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 16), b''):
            digest.update(chunk)
    return digest.hexdigest()


def atomic_write(path, text):
    """Write text to path so that readers never see a partial file."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix='.tmp-')
    try:
        with os.fdopen(fd, 'w', encoding='utf-8') as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
