#!/usr/bin/env python3
# Copyright 2026 The INCE Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Extract the bundled benchmark datasets into data/*.csv.

California Housing ships inside the pytorch-widedeep wheel and the
Titanic passenger list (1309 rows) inside the dabl wheel; both are
fetched with `pip download` so no direct internet access is needed.

HELOC (FICO) is not redistributed by any package; drop the FICO
`heloc_dataset_v1.csv` into data/ and rerun to convert it.
"""
import argparse
import io
import pathlib
import subprocess
import tempfile
import zipfile

import pandas as pd


def fetch_wheel(package, dest):
    subprocess.run(["pip", "download", "--no-deps", "-q", "-d", dest, package], check=True)
    return next(pathlib.Path(dest).glob(package.replace("-", "_") + "*.whl"))


def california(tmp, out):
    whl = zipfile.ZipFile(fetch_wheel("pytorch-widedeep", tmp))
    raw = whl.read("pytorch_widedeep/datasets/data/california_housing.parquet.brotli")
    df = pd.read_parquet(io.BytesIO(raw))
    df.to_csv(out / "california_housing.csv", index=False, float_format="%.10g")
    (out / "california_housing.schema").write_text(
        "task regression\n"
        + "".join(f"numerical {c}\n" for c in df.columns[:-1])
        + "target MedHouseVal\n")


def title_of(name):
    title = name.split(",")[1].split(".")[0].strip()
    if title in ("Mr", "Master"):
        return "Mr"
    if title in ("Mrs", "Miss", "Mme", "Mlle", "Ms"):
        return "Mrs"
    return "Rare"


def titanic(tmp, out):
    whl = zipfile.ZipFile(fetch_wheel("dabl", tmp))
    df = pd.read_csv(io.BytesIO(whl.read("dabl/datasets/titanic.csv")), na_values="?")
    family = df["sibsp"] + df["parch"]
    res = pd.DataFrame({
        "age": df["age"],
        "fare": df["fare"],
        "sex": df["sex"],
        "title": df["name"].map(title_of),
        "pclass": df["pclass"],
        "family_size": family,
        "is_alone": (family == 0).astype(int),
        "embarked": df["embarked"],
        "survived": df["survived"],
    })
    res.to_csv(out / "titanic.csv", index=False)
    (out / "titanic.schema").write_text(
        "task binary\n"
        "numerical age\nnumerical fare\n"
        "categorical sex\ncategorical title\ncategorical pclass\n"
        "categorical family_size\ncategorical is_alone\ncategorical embarked\n"
        "target survived\n")


def heloc(out):
    src = out / "heloc_dataset_v1.csv"
    if not src.exists():
        print("heloc: data/heloc_dataset_v1.csv not present, skipped")
        return
    df = pd.read_csv(src)
    feats = [c for c in df.columns if c != "RiskPerformance"]
    # rows with every feature == -9 carry no information; dropping them leaves 9871
    df = df[~(df[feats] == -9).all(axis=1)]
    df[feats] = df[feats].mask(df[feats] < 0)
    df["RiskPerformance"] = (df["RiskPerformance"] == "Good").astype(int)
    df.to_csv(out / "heloc.csv", index=False)
    cats = {"MaxDelq2PublicRecLast12M", "MaxDelqEver"}
    (out / "heloc.schema").write_text(
        "task binary\n"
        + "".join(("categorical " if c in cats else "numerical ") + c + "\n" for c in feats)
        + "target RiskPerformance\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data"))
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        california(tmp, out)
        titanic(tmp, out)
    heloc(out)


if __name__ == "__main__":
    main()
