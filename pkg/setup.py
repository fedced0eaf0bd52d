from setuptools import setup, find_packages
import re

def get_property(prop, project):
    result = re.search(r'{}\s*=\s*[\'"]([^\'"]*)[\'"]'.format(prop),
                       open(project + '/__init__.py').read())
    return result.group(1)

reqs = []
for line in open('requirements.txt', 'r').readlines():
    if line.strip():
        reqs.append(line.strip())

setup(
    name="magnonlab",
    version=get_property('__version__', 'magnonlab'),
    description="Pairwise concurrence of one-particle states in Harper, "
                "kicked Harper and random-matrix models",
    packages=find_packages(exclude=['tests']),
    python_requires='>=3.8',
    entry_points={'console_scripts': ['magnon-lab=magnonlab.cli:main']},
    install_requires=reqs,
    extras_require={'tests': ['pytest']},
)
