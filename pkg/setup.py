from setuptools import setup
from setuptools import find_packages

long_description = '''
LoopForge computes with loops and rays based at a marked puncture of a
surface, possibly of infinite type.

It builds the two-polygon atlas of a surface from its genus and end
space, reduces crossing words to normal form, enumerates finite slices
of loop and ray graphs, estimates hyperbolicity and translation lengths,
and follows the dynamics of mapping classes on the circle of rays:
attractive and repulsive cliques, weights and rotation numbers.

```
loopforge dyn weight penner
```

LoopForge is compatible with Python 3.6+
and is distributed under the MIT license.
'''

setup(name='LoopForge',
      version='0.1.0',
      description='Loop graphs and mapping class dynamics on surfaces',
      long_description=long_description,
      license='MIT',
      install_requires=['numpy>=1.9.1',
                        'h5py',
                        'networkx>=2.0',
                        'tqdm'],
      extras_require={
          'tests': ['pytest',
                    'pytest-pep8',
                    'pytest-xdist',
                    'pytest-cov'],
      },
      entry_points={
          'console_scripts': ['loopforge=loopforge.cli:main'],
      },
      classifiers=[
          'Development Status :: 3 - Alpha',
          'Intended Audience :: Education',
          'Intended Audience :: Science/Research',
          'License :: OSI Approved :: MIT License',
          'Programming Language :: Python :: 3',
          'Programming Language :: Python :: 3.6',
          'Topic :: Scientific/Engineering :: Mathematics',
          'Topic :: Software Development :: Libraries :: Python Modules'
      ],
      packages=find_packages(exclude=['tests', 'examples', 'examples.*']))
