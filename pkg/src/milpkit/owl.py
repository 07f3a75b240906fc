"""OWL/XML emission of the modelling ontology.

The ontology mirrors the package's data model: a top-level MILP class
whose parts are the problem sense, the objective function, and the
constraints; constraints decompose into a linear function, a sense, and a
right-hand side; every typology family is a subclass of Constraint.
Emission only -- no reasoning.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass

from .typology import ALL_TAG_NAMES

ONTOLOGY_IRI = "urn:milpkit:ontology"


class OntologyError(ValueError):
    pass


@dataclass(frozen=True)
class OntologyDescriptor:
    classes: tuple
    subclass_pairs: tuple   # (subclass, superclass)
    part_of_pairs: tuple    # (part, whole)


CORE_CLASSES = (
    "MILP",
    "ProblemSense",
    "ObjectiveFunction",
    "Constraint",
    "LinearFunction",
    "Coefficient",
    "Operator",
    "DecisionVariable",
    "NumberType",
    "IndexSet",
    "Iterator",
    "Sense",
)


def default_descriptor() -> OntologyDescriptor:
    classes = CORE_CLASSES + tuple(sorted(ALL_TAG_NAMES))
    subclass_pairs = tuple((name, "Constraint") for name in sorted(ALL_TAG_NAMES))
    part_of_pairs = (
        ("ProblemSense", "MILP"),
        ("ObjectiveFunction", "MILP"),
        ("Constraint", "MILP"),
        ("Iterator", "MILP"),
        ("Sense", "Constraint"),
        ("LinearFunction", "Constraint"),
        ("LinearFunction", "ObjectiveFunction"),
        ("Coefficient", "LinearFunction"),
        ("Operator", "LinearFunction"),
        ("DecisionVariable", "LinearFunction"),
        ("NumberType", "DecisionVariable"),
        ("IndexSet", "DecisionVariable"),
        ("NumberType", "Coefficient"),
        ("IndexSet", "Coefficient"),
    )
    return OntologyDescriptor(classes, subclass_pairs, part_of_pairs)


def _class(parent, name):
    ET.SubElement(parent, "Class", IRI=f"#{name}")


def write_owl(descriptor: OntologyDescriptor) -> str:
    """Deterministic OWL/XML document for the descriptor."""
    if not descriptor.classes:
        raise OntologyError("descriptor has no classes")
    known = set(descriptor.classes)
    for pair in tuple(descriptor.subclass_pairs) + tuple(descriptor.part_of_pairs):
        for name in pair:
            if name not in known:
                raise OntologyError(f"relation references unknown class {name!r}")

    root = ET.Element("Ontology", xmlns="http://www.w3.org/2002/07/owl#",
                      ontologyIRI=ONTOLOGY_IRI)
    for name in descriptor.classes:
        decl = ET.SubElement(root, "Declaration")
        _class(decl, name)
    decl = ET.SubElement(root, "Declaration")
    ET.SubElement(decl, "ObjectProperty", IRI="#part_of")

    for sub, sup in descriptor.subclass_pairs:
        sc = ET.SubElement(root, "SubClassOf")
        _class(sc, sub)
        _class(sc, sup)
    for part, whole in descriptor.part_of_pairs:
        sc = ET.SubElement(root, "SubClassOf")
        _class(sc, part)
        some = ET.SubElement(sc, "ObjectSomeValuesFrom")
        ET.SubElement(some, "ObjectProperty", IRI="#part_of")
        _class(some, whole)

    ET.indent(root, space="    ")
    body = ET.tostring(root, encoding="unicode", xml_declaration=False)
    return '<?xml version="1.0"?>\n' + body + "\n"
