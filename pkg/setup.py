from setuptools import find_packages
from setuptools import setup


F = 'README.md'
with open(F, 'r') as readme:
    LONG_DESCRIPTION = readme.read()


setup(name='lna-fim', version='0.1.0', license='MIT',
      packages=find_packages(include=['lna_fim', 'lna_fim.*']),
      package_data={'lna_fim': ['models/*.net', 'models/*.json']},
      description='Fisher information and experimental design for '
                  'stochastic reaction networks under the linear '
                  'noise approximation',
      long_description=LONG_DESCRIPTION,
      long_description_content_type='text/markdown',
      keywords=['Fisher Information', 'Linear Noise Approximation',
                'Experimental Design', 'Systems Biology'],
      extras_require={'tests': ['pytest']},
      install_requires=['numpy', 'scipy', 'sympy', 'pandas'],
      entry_points={'console_scripts': ['lna-fim = lna_fim.cli:main']},
      classifiers=[
          'Intended Audience :: Developers',
          'Intended Audience :: Science/Research',
          'Topic :: Scientific/Engineering',
          'Topic :: Scientific/Engineering :: Bio-Informatics',
          'Topic :: Scientific/Engineering :: Mathematics',
          'Topic :: Software Development :: Libraries :: Python Modules',
          'License :: OSI Approved :: MIT License',
          'Programming Language :: Python :: 3',
          'Programming Language :: Python :: 3.8',
          'Programming Language :: Python :: 3.9'])
