import xml.etree.ElementTree as ET

import pytest

from milpkit.owl import (
    CORE_CLASSES,
    OntologyDescriptor,
    OntologyError,
    default_descriptor,
    write_owl,
)
from milpkit.typology import ALL_TAG_NAMES


def normalized(text):
    return " ".join(text.split())


@pytest.fixture(scope="module")
def doc():
    return write_owl(default_descriptor())


def test_setcovering_subclass_fragment(doc):
    fragment = ('<SubClassOf> <Class IRI="#SetCovering" /> '
                '<Class IRI="#Constraint" /> </SubClassOf>')
    assert fragment in normalized(doc)


def test_part_of_declaration_and_sense_restriction(doc):
    flat = normalized(doc)
    assert '<Declaration> <ObjectProperty IRI="#part_of" /> </Declaration>' in flat
    fragment = ('<SubClassOf> <Class IRI="#Sense" /> <ObjectSomeValuesFrom> '
                '<ObjectProperty IRI="#part_of" /> <Class IRI="#Constraint" /> '
                '</ObjectSomeValuesFrom> </SubClassOf>')
    assert fragment in flat


def test_all_core_classes_declared(doc):
    for name in CORE_CLASSES:
        assert f'<Class IRI="#{name}" />' in doc


def test_every_typology_family_is_a_constraint_subclass():
    d = default_descriptor()
    subs = {sub for sub, sup in d.subclass_pairs if sup == "Constraint"}
    assert set(ALL_TAG_NAMES) <= subs


def test_output_is_well_formed_xml_and_deterministic(doc):
    root = ET.fromstring(doc)
    assert root.tag.endswith("Ontology")
    assert write_owl(default_descriptor()) == doc


def test_unknown_class_in_relation_rejected():
    d = OntologyDescriptor(("A",), (("A", "Missing"),), ())
    with pytest.raises(OntologyError, match="unknown class"):
        write_owl(d)
    with pytest.raises(OntologyError, match="no classes"):
        write_owl(OntologyDescriptor((), (), ()))
