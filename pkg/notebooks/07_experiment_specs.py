# %% [markdown]
# # Running reproductions from JSON specs
#
# The command line runner reads a spec, runs the named experiment and writes
# results.csv and summary.json.  The same entry point is callable from
# Python.

# %%
import json
import os
import tempfile

from synthcone.cli import main

here = os.path.dirname(os.path.abspath(__file__)) if "__file__" in globals() else os.getcwd()
specs = os.path.join(os.path.dirname(here), "specs")
main(["list-experiments"])

# %%
with tempfile.TemporaryDirectory() as out:
    code = main(["run", os.path.join(specs, "ln_law.json"), "--out", out])
    folder = os.path.join(out, os.listdir(out)[0])
    print("exit code", code)
    print(open(os.path.join(folder, "results.csv")).read())
    print(json.dumps(json.load(open(os.path.join(folder, "summary.json")))["checks"][:2], indent=1))
