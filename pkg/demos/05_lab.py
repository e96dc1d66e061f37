"""
Running the experiment suites from Python
=========================================

The same runs are available on the command line as
``stablab uncertainty|extremality|monotonicity|clt|state``.
"""

from stablab import lab

config = lab.ExperimentConfig("uncertainty", d=3, n=2, count=30, seed=1, out="out/demo-uncertainty")
report = lab.run(config)
for name, check in report.checks().items():
    print(f"{check['violations']} / {check['cases']}  {name}")
print(report.summary)
print(lab.emit(report))

clt = lab.run(lab.ExperimentConfig("clt", d=7, n=1, family="full", count=5, L=8, out="out/demo-clt"))
print(clt.summary)
lab.emit(clt)
print(open("out/demo-clt/decay.dat").read())
