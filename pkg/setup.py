from setuptools import setup

setup(name='whitenorm',
      version='0.1.0',
      description='Decorrelated batch normalization: group-wise ZCA whitening with exact backprop',
      packages=['whitenorm',
                'whitenorm.adapters',
                'whitenorm.adapters.datasets',
                'whitenorm.adapters.runs',
                'whitenorm.logic',
                ],
        install_requires=[
            'numpy',
            'scipy',
            'pandas',
            'arrow',
            'jsonpickle',
            'ujson'
        ],
        entry_points={
            'console_scripts': ['whitenorm=whitenorm.cli:main'],
        }
     )
