# -*- coding: utf-8 -*-

"""Setup.py for procaug."""

import setuptools

if __name__ == '__main__':
    setuptools.setup()
