#!/usr/bin/env python3
"""Sample the bundled corpora from the MOSES (ZINC clean-leads) splits and the
NCI sample shipped with RDKit.

Usage: make_corpora.py MOSES_TRAIN_CSV MOSES_TEST_CSV NCI_SMI OUT_DIR
"""
import random
import sys

from rdkit import Chem, RDLogger

RDLogger.DisableLog("rdApp.*")


def read_csv(path):
    with open(path) as fh:
        next(fh)
        return [line.split(",")[0].strip() for line in fh if line.strip()]


def canon(smi):
    mol = Chem.MolFromSmiles(smi)
    return None if mol is None else Chem.MolToSmiles(mol)


def main():
    train_csv, test_csv, nci_smi, out = sys.argv[1:5]
    rng = random.Random(20240611)
    train = read_csv(train_csv)
    test = read_csv(test_csv)
    rng.shuffle(train)
    rng.shuffle(test)

    reference = train[:250000]
    ref_canon = {canon(s) for s in reference}

    test_corpus = []
    for smi in test:
        if canon(smi) not in ref_canon:
            test_corpus.append(smi)
        if len(test_corpus) == 10000:
            break
    test_canon = {canon(s) for s in test_corpus}

    train_source = []
    for smi in train[250000:]:
        c = canon(smi)
        if c in ref_canon or c in test_canon:
            continue
        train_source.append(smi)
        if len(train_source) == 40000:
            break

    allowed = {1, 5, 6, 7, 8, 9, 14, 15, 16, 17, 33, 34, 35, 51, 52, 53, 83, 84}
    nci = []
    with open(nci_smi) as fh:
        for line in fh:
            smi = line.split()[0]
            mol = Chem.MolFromSmiles(smi)
            if mol is None or "." in smi:
                continue
            if any(a.GetAtomicNum() not in allowed for a in mol.GetAtoms()):
                continue
            nci.append(smi)

    for name, rows in [("zinc_reference.smi", reference),
                       ("test_corpus.smi", test_corpus),
                       ("train_source.smi", train_source + nci[:2500]),
                       ("nci_diverse.smi", nci[2500:])]:
        with open(f"{out}/{name}", "w") as fh:
            fh.write("\n".join(rows) + "\n")
        print(name, len(rows))


if __name__ == "__main__":
    main()
