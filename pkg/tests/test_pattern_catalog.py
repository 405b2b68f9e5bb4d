"""Builtin catalog contents, classification queries, ordering, file format."""

import pytest

from conftest import CATALOGS
from disreqc.pattern_catalog import (
    BUILTIN_SYMBOLS,
    TEMPLATE_IDS,
    Catalog,
    CatalogError,
    Pattern,
    PatternCycleError,
    UnknownPatternError,
    builtin_catalog,
    load_catalog,
    query,
    resolve_order,
    save_catalog,
)

CHAIN = [
    "DiagnosisSID",
    "RecenseBesomsSID",
    "AssocieButStra-ButTact",
    "AssocieButTact-ButInfo",
    "FormaliseButInfo",
]


def make_pattern(symbol, requires=(), classification=("DIS", "Analysis")):
    return Pattern(
        symbol=symbol,
        name=symbol.lower(),
        classification=tuple(classification),
        context="",
        problem="",
        strength="",
        process_solution=(),
        model_solution="diagnosis",
        uses=(),
        requires=tuple(requires),
    )


def test_builtin_symbols_exact():
    catalog = builtin_catalog()
    assert catalog.name == "builtin"
    assert list(catalog.symbols()) == CHAIN
    assert list(BUILTIN_SYMBOLS) == CHAIN


def test_builtin_requires_edges():
    catalog = builtin_catalog()
    expected = {
        "DiagnosisSID": (),
        "RecenseBesomsSID": ("DiagnosisSID",),
        "AssocieButStra-ButTact": ("RecenseBesomsSID",),
        "AssocieButTact-ButInfo": (
            "RecenseBesomsSID",
            "AssocieButStra-ButTact",
        ),
        "FormaliseButInfo": (
            "RecenseBesomsSID",
            "AssocieButStra-ButTact",
            "AssocieButTact-ButInfo",
        ),
    }
    for symbol, requires in expected.items():
        assert catalog.find(symbol).requires == requires


def test_builtin_uses_edges():
    catalog = builtin_catalog()
    assert catalog.find("DiagnosisSID").uses == ("AnalyseDIS",)
    for symbol in CHAIN[2:]:
        assert catalog.find(symbol).uses == ("DiagnosisSID",)
    # uses may dangle; the catalog still loads and orders
    assert resolve_order(catalog, ["DiagnosisSID"]) == ["DiagnosisSID"]


def test_builtin_rubrics_filled():
    for pattern in builtin_catalog().patterns:
        assert pattern.name
        assert pattern.classification
        assert pattern.context
        assert pattern.problem
        assert pattern.strength
        assert len(pattern.process_solution) >= 2
        assert pattern.model_solution in TEMPLATE_IDS


def test_find_unknown_symbol_returns_none():
    assert builtin_catalog().find("Nope") is None


def test_unknown_pattern_error_shape():
    err = UnknownPatternError("Nope")
    assert err.symbol == "Nope"
    assert str(err) == 'unknown pattern "Nope"'


def test_query_prefix_matching():
    catalog = builtin_catalog()

    def symbols(prefix):
        return [p.symbol for p in query(catalog, prefix)]

    assert symbols(["DIS"]) == sorted(CHAIN)
    assert symbols(["DIS", "Analysis"]) == sorted(CHAIN)
    assert symbols(["DIS", "Analysis", "Product"]) == [
        "AssocieButStra-ButTact",
        "AssocieButTact-ButInfo",
        "FormaliseButInfo",
    ]
    assert symbols(["Design"]) == []


def test_query_treats_sid_as_dis_alias():
    catalog = builtin_catalog()
    a = [p.symbol for p in query(catalog, ["SID", "Analysis", "Product"])]
    b = [p.symbol for p in query(catalog, ["DIS", "Analysis", "Product"])]
    assert a == b and a


def test_query_product_process_unordered():
    catalog = builtin_catalog()
    a = [p.symbol for p in query(catalog, ["DIS", "Analysis", "Product", "Process"])]
    b = [p.symbol for p in query(catalog, ["DIS", "Analysis", "Process", "Product"])]
    assert a == b == ["DiagnosisSID", "RecenseBesomsSID"]


def test_query_partial_segment_no_match():
    # A prefix naming only half of a merged Product/Process run matches
    # nothing: the run is a single unordered segment.
    assert query(builtin_catalog(), ["DIS", "Analysis", "Process"]) == []


def test_resolve_order_full_chain():
    assert resolve_order(builtin_catalog(), ["FormaliseButInfo"]) == CHAIN
    assert resolve_order(builtin_catalog(), ["AssocieButStra-ButTact"]) == CHAIN[:3]


def test_resolve_order_ties_lexicographic():
    catalog = Catalog(
        name="t",
        patterns=(
            make_pattern("Zeta"),
            make_pattern("Alpha"),
            make_pattern("Mid", requires=("Zeta", "Alpha")),
        ),
    )
    assert resolve_order(catalog, ["Mid"]) == ["Alpha", "Zeta", "Mid"]


def test_resolve_order_unknown_target():
    with pytest.raises(UnknownPatternError):
        resolve_order(builtin_catalog(), ["Nope"])


def test_resolve_order_cycle():
    catalog = Catalog(
        name="t",
        patterns=(
            make_pattern("A", requires=("B",)),
            make_pattern("B", requires=("A",)),
        ),
    )
    with pytest.raises(PatternCycleError) as exc:
        resolve_order(catalog, ["A"])
    assert exc.value.members == ("A", "B")


def test_save_load_builtin_lossless():
    catalog = builtin_catalog()
    assert load_catalog(save_catalog(catalog)) == catalog


def test_save_load_custom_lossless():
    catalog = Catalog(
        name="custom",
        patterns=(
            Pattern(
                symbol="Steps",
                name="multi step",
                classification=("DIS", "Design", "Product"),
                context="ctx text",
                problem="problem text",
                strength="why it helps",
                process_solution=("first step", "second step", "third step"),
                model_solution="pattern_sheet",
                uses=("Other", "Steps"),
                requires=(),
            ),
        ),
    )
    text = save_catalog(catalog)
    assert load_catalog(text) == catalog
    # stable serialization
    assert save_catalog(load_catalog(text)) == text


def test_save_layout():
    text = save_catalog(builtin_catalog())
    assert text.startswith("catalog: builtin\n\n")
    assert "\n---\n" in text
    assert "classification: DIS/Analysis/Product/Process" in text
    assert "\n  1. " in text


def test_load_tolerates_crlf_comments_blanks():
    text = save_catalog(builtin_catalog())
    noisy = "# leading comment\r\n" + text.replace("\n", "\r\n")
    assert load_catalog(noisy) == builtin_catalog()


def test_load_missing_header_defaults_name():
    text = (
        "symbol: Solo\n"
        "name: solo\n"
        "classification: DIS/Analysis\n"
        "model_solution: diagnosis\n"
    )
    catalog = load_catalog(text)
    assert catalog.find("Solo").symbol == "Solo"


@pytest.mark.parametrize(
    ("body", "fragment"),
    [
        ("symbol DiagnosisX\n", "C001"),
        ("symbol: X\nwhatever: y\n", "C001"),
        ("symbol: X\nsymbol: Y\n", "C001"),
        ("symbol: X\nname: n\nclassification: DIS\n", "C001"),
        (
            "symbol: X\nname: n\nclassification:    \nmodel_solution: diagnosis\n",
            "C001",
        ),
        (
            "symbol: X\nname: n\nclassification: DIS\nmodel_solution: bogus\n",
            "C001",
        ),
        ("  1. stray step\n", "C001"),
    ],
    ids=[
        "no-colon",
        "unknown-key",
        "duplicate-key",
        "missing-field",
        "empty-classification",
        "unknown-template",
        "stray-step",
    ],
)
def test_load_malformed(body, fragment):
    with pytest.raises(CatalogError) as exc:
        load_catalog(body)
    assert exc.value.code == fragment
    assert str(exc.value).startswith(fragment + ":")


def test_load_fixture_errors():
    expected = {
        "c001": "C001",
        "c002": "C002",
        "c003": "C003",
        "c004": "C004",
    }
    for stem, code in expected.items():
        path = CATALOGS / f"{stem}.catalog"
        with pytest.raises(CatalogError) as exc:
            load_catalog(path.read_text(encoding="utf-8"))
        assert exc.value.code == code, stem
