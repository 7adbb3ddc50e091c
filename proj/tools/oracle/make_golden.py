#!/usr/bin/env python3
"""Freeze RDKit reference values for the descriptor golden files.

Usage: make_golden.py INPUT_SMI COUNT SEED OUT_TSV

Columns: smiles, logp, mr, qed, mw, hba, hbd, psa, rotb, arom, alerts,
crippen atom labels (comma separated, heavy atoms in input order) and the
aromatic flag string (one 0/1 per heavy atom in input order).
"""
import os
import random
import sys

from rdkit import Chem, RDConfig, RDLogger
from rdkit.Chem import Crippen, QED
from rdkit.Chem import rdMolDescriptors as rd

RDLogger.DisableLog("rdApp.*")


_RULES = []


def _load_rules():
    path = os.path.join(RDConfig.RDDataDir, "Crippen.txt")
    with open(path) as fh:
        for line in fh:
            if line.startswith("#"):
                continue
            cols = line.rstrip("\n").split("\t")
            if len(cols) >= 4 and cols[0]:
                sma = cols[1]
                # The compiled RDKit table spells this H2 rule with atomic
                # numbers, so aromatic n-H falls through to H3.
                if sma == "[#1][!C;!N;!O]":
                    sma = "[#1][!#6;!#7;!#8]"
                patt = Chem.MolFromSmarts(sma)
                logp = float(cols[2])
                mr = float(cols[3]) if cols[3] else 0.0
                _RULES.append((cols[0], patt, logp, mr))


def crippen_labels(mol):
    """Per-heavy-atom Crippen type, first matching rule in file order on the
    hydrogen-expanded graph."""
    if not _RULES:
        _load_rules()
    hmol = Chem.AddHs(mol)
    labels = [None] * hmol.GetNumAtoms()
    for label, patt, _, _ in _RULES:
        for match in hmol.GetSubstructMatches(patt, False, False):
            if labels[match[0]] is None:
                labels[match[0]] = label
    return [labels[i] or "?" for i in range(mol.GetNumAtoms())]


def main():
    src, count, seed, out = sys.argv[1], int(sys.argv[2]), int(sys.argv[3]), sys.argv[4]
    with open(src) as fh:
        rows = [line.split()[0] for line in fh if line.strip()]
    if count < len(rows):
        rows = random.Random(seed).sample(rows, count)
    with open(out, "w") as fh:
        fh.write("# smiles\tlogp\tmr\tqed\tmw\thba\thbd\tpsa\trotb\tarom\talerts\tcrippen_types\taromatic\n")
        for smi in rows:
            mol = Chem.MolFromSmiles(smi)
            if mol is None:
                continue
            props = QED.properties(mol)
            labels = crippen_labels(mol)
            arom = "".join("1" if a.GetIsAromatic() else "0" for a in mol.GetAtoms())
            fh.write("\t".join([
                smi,
                f"{Crippen.MolLogP(mol):.6f}",
                f"{Crippen.MolMR(mol):.6f}",
                f"{QED.qed(mol):.6f}",
                f"{props.MW:.4f}",
                str(props.HBA), str(props.HBD), f"{props.PSA:.4f}",
                str(props.ROTB), str(props.AROM), str(props.ALERTS),
                ",".join(labels), arom,
            ]) + "\n")


if __name__ == "__main__":
    main()
