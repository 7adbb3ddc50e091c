#!/usr/bin/env python3
"""Harvest the polar surface area fragment table from RDKit per-atom TPSA
contributions.

Usage: make_tpsa_table.py OUT_TXT SMI [SMI ...]

Rows are keyed by the atom environment the contribution depends on: element,
aromatic flag, heavy degree, total hydrogens, formal charge, counts of
single/double/triple/aromatic bonds to heavy atoms, and 3-ring membership.
Environments seen with conflicting values abort the run.
"""
import sys
from collections import Counter

from rdkit import Chem, RDLogger
from rdkit.Chem import rdMolDescriptors as rd

RDLogger.DisableLog("rdApp.*")

EXTRA = [
    "CN=[N+]=[N-]", "C[N+](=O)[O-]", "CN(=O)=O", "C[n+]1ccccc1", "[O-][n+]1ccccc1",
    "C#N", "C[N+]#[C-]", "CN=C=O", "C=NO", "C1CN1", "C1CO1", "C1=CN1", "N1=NC1",
    "C[NH3+]", "C[NH2+]C", "C[NH+](C)C", "C[N+](C)(C)C", "CC(=O)[O-]", "C[O-]",
    "c1cc[nH]c1", "c1ccncc1", "c1cc[o+]cc1", "CN=C", "C=[NH2+]", "C=[N+](C)C",
    "c1cc[nH+]cc1", "Cn1cccc1", "CC(=[OH+])C", "C[OH2+]", "C=[O+]C", "CON", "C=N",
    "N#[N+][N-]C", "c1ccn2ccccc12", "Cn1cc[n+](C)c1", "C[N-]S(C)(=O)=O", "C=[N-]",
    "[nH]1cccc1", "c1c[n-]cc1", "CN=[N+]([O-])C", "C1=N[N+]1", "C1C2CN12", "CP(=O)(O)O",
    "C=[NH+]C", "CC#[N+]C", "C1C[NH2+]1", "C1C[NH+]1C", "C1=[N+]C1", "C=[OH+]", "C#[NH+]",
]


def key(atom, mol):
    ring_info = mol.GetRingInfo()
    counts = Counter()
    for b in atom.GetBonds():
        counts[b.GetBondType()] += 1
    return (
        atom.GetSymbol(),
        int(atom.GetIsAromatic()),
        atom.GetDegree(),
        atom.GetTotalNumHs(),
        atom.GetFormalCharge(),
        counts[Chem.BondType.SINGLE],
        counts[Chem.BondType.DOUBLE],
        counts[Chem.BondType.TRIPLE],
        counts[Chem.BondType.AROMATIC],
        int(ring_info.IsAtomInRingOfSize(atom.GetIdx(), 3)),
    )


def main():
    out = sys.argv[1]
    table = {}
    seen = Counter()
    smiles = list(EXTRA)
    for path in sys.argv[2:]:
        with open(path) as fh:
            smiles.extend(line.split()[0] for line in fh if line.strip())
    for smi in smiles:
        mol = Chem.MolFromSmiles(smi)
        if mol is None:
            continue
        contribs = rd._CalcTPSAContribs(mol)
        for atom, c in zip(mol.GetAtoms(), contribs):
            if atom.GetAtomicNum() not in (7, 8):
                continue
            k = key(atom, mol)
            v = round(c, 2)
            if k in table and table[k] != v:
                raise SystemExit(f"conflict at {k}: {table[k]} vs {v} ({smi})")
            table[k] = v
            seen[k] += 1
    with open(out, "w") as fh:
        fh.write("# element aromatic degree hydrogens charge single double triple aromatic_bonds in_3ring psa\n")
        for k in sorted(table):
            fh.write(" ".join(str(x) for x in k) + f" {table[k]:.2f}\n")
    print(len(table), "environments")


if __name__ == "__main__":
    main()
