#!/usr/bin/env python3
import sys
import unittest


def run():
    suite = unittest.defaultTestLoader.discover('tests', top_level_dir='.')
    result = unittest.TextTestRunner(verbosity=1 + ('-v' in sys.argv[1:])).run(suite)
    sys.exit(0 if result.wasSuccessful() else 1)

if __name__ == '__main__':
    run()
