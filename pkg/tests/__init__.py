# -*- coding: utf-8 -*-
"""
binomdec Tests Package

This package contains unit tests for the binomdec project.
"""
