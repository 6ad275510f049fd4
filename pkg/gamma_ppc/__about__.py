# pylint: disable=missing-module-docstring
# -*- coding: utf-8 -*-
__short_version__ = '0.3'
__release__ = '0.3.0'
__description__ = 'Inhomogeneous Poissonian pair correlations: counting kernels, constructions and checks'
