import pytest
from hypothesis import given, strategies as st

import oracles
from chembalance.chem import (
    InconsistentParameter,
    ParseError,
    adjacency,
    balance,
    balance_report,
    parse_formula,
    parse_reaction,
    render,
)
from chembalance.matrix import Matrix
from chembalance.ring import PolynomialRing, ZZ

R = PolynomialRing("n")


class TestParseFormula:
    def test_sulfuric_acid(self):
        f = parse_formula("H2SO4")
        assert f.composition == {"H": 2, "S": 1, "O": 4}
        assert f.charge == 0

    def test_sulfite_ion(self):
        f = parse_formula("SO3^2-")
        assert f.composition == {"S": 1, "O": 3}
        assert f.charge == -2

    def test_plain_anion_and_cation(self):
        assert parse_formula("MnO4^-").charge == -1
        assert parse_formula("Fe^3+").charge == 3
        assert parse_formula("Na^+").charge == 1

    def test_parametric_paraffin(self):
        f = parse_formula("CnH2n+2", "n")
        assert f.composition == {"C": R.parse("n"), "H": R.parse("2n+2")}

    def test_nested_complex(self):
        f = parse_formula("[Cr(N2H4CO)6]4[Cr(CN)6]3")
        assert f.composition == {"Cr": 7, "N": 66, "H": 96, "C": 42, "O": 24}

    def test_parentheses(self):
        assert parse_formula("Ca(OH)2").composition == {"Ca": 1, "O": 2, "H": 2}

    def test_hydrate_rejected(self):
        with pytest.raises(ParseError):
            parse_formula("CuSO4.5H2O")

    def test_unmatched_group(self):
        with pytest.raises(ParseError) as err:
            parse_formula("Ca(OH2")
        assert err.value.position == 2

    def test_errors_carry_positions(self):
        with pytest.raises(ParseError) as err:
            parse_formula("H2o!")
        assert err.value.position is not None

    def test_empty(self):
        with pytest.raises(ParseError):
            parse_formula("   ")


class TestParseReaction:
    def test_sides(self):
        r = parse_reaction("Fe + O2 -> FeO + Fe2O3")
        assert [f.source for f in r.left] == ["Fe", "O2"]
        assert [f.source for f in r.right] == ["FeO", "Fe2O3"]
        assert r.atoms == ("Fe", "O")

    def test_equals_arrow(self):
        r = parse_reaction("H2 + O2 = H2O")
        assert len(r.left) == 2 and len(r.right) == 1

    def test_bare_list(self):
        r = parse_reaction("FeS + H2SO4 + FeSO4 + H2O")
        assert not r.has_sides
        assert len(r.compounds) == 4

    def test_charge_row_appended(self):
        r = parse_reaction("H2O + MnO4^- + SO3^2- -> OH^- + MnO2 + SO4^2-")
        assert r.atoms == ("H", "Mn", "O", "S", "charge")

    def test_parametric_terms_split_correctly(self):
        r = parse_reaction("CO + H2 -> CnH2n+2 + H2O", "n")
        assert [f.source for f in r.right] == ["CnH2n+2", "H2O"]

    def test_charged_terms_split_correctly(self):
        r = parse_reaction("Fe^3+ + Cu -> Fe^2+ + Cu^2+")
        assert [f.source for f in r.left] == ["Fe^3+", "Cu"]
        assert [f.source for f in r.right] == ["Fe^2+", "Cu^2+"]

    def test_declared_coefficients_recorded(self):
        r = parse_reaction("2 H2 + O2 -> 2 H2O")
        assert r.declared == (2, None, 2)

    def test_two_arrows_rejected(self):
        with pytest.raises(ParseError):
            parse_reaction("A -> B -> C")

    def test_one_sided_arrow_rejected(self):
        with pytest.raises(ParseError):
            parse_reaction("H2 + O2 ->")


class TestAdjacency:
    def test_iron_oxides(self):
        r = parse_reaction("Fe + O2 -> FeO + Fe2O3")
        assert adjacency(r).row_list() == [(1, 0, 1, 2), (0, 2, 1, 3)]

    def test_single_compound(self):
        r = parse_reaction("H2O")
        assert adjacency(r).columns() == [(2, 1)]

    def test_ionic_with_charge_row(self):
        r = parse_reaction("H2O + MnO4^- + SO3^2- -> OH^- + MnO2 + SO4^2-")
        a = adjacency(r)
        assert (a.rows, a.cols) == (5, 6)
        assert a.row(4) == (0, -1, -2, -1, 0, -2)

    def test_atom_order_override(self):
        r = parse_reaction("H2O + MnO4^- + SO3^2- -> OH^- + MnO2 + SO4^2-")
        a = adjacency(r, atom_order=["H", "Mn", "S", "O"])
        assert a.row(2) == (0, 0, 1, 0, 0, 1)  # S row third, as requested
        assert a.row(4) == (0, -1, -2, -1, 0, -2)

    def test_atom_order_must_be_permutation(self):
        r = parse_reaction("H2 + O2 -> H2O")
        with pytest.raises(ValueError):
            adjacency(r, atom_order=["H", "N"])


class TestBalance:
    def test_infeasible_compound_set(self):
        r = parse_reaction("FeS + H2SO4 + FeSO4 + H2O")
        result = balance(r)
        assert not result.feasible
        assert render(result, r) == "no balanced reaction exists among these compounds"

    def test_ionic_permanganate(self):
        r = parse_reaction("H2O + MnO4^- + SO3^2- -> OH^- + MnO2 + SO4^2-")
        result = balance(r)
        assert result.coefficients.columns() == [(-1, -2, -3, 2, 2, 3)]
        assert result.oriented
        assert (
            render(result, r)
            == "H2O + 2 MnO4^- + 3 SO3^2- -> 2 OH^- + 2 MnO2 + 3 SO4^2-"
        )

    def test_iron_oxides_two_generators(self):
        r = parse_reaction("Fe + O2 -> FeO + Fe2O3")
        result = balance(r)
        cols = result.coefficients.columns()
        assert len(cols) == 2
        # lattice equality with the fundamental pair 2Fe+O2->2FeO, 3FeO->Fe2O3+Fe
        assert oracles.z_spans_equal(cols, [(-2, -1, 2, 0), (1, 0, -3, 1)])
        assert oracles.in_z_span((-2, -1, 2, 0), cols)
        assert oracles.in_z_span((1, 0, -3, 1), cols)
        # the raw kernel pair does not generate the full lattice
        raw = balance(r, saturate=False).coefficients.columns()
        assert not oracles.in_z_span((1, 0, -3, 1), raw)

    def test_fischer_tropsch(self):
        r = parse_reaction("CO + H2 -> CnH2n+2 + H2O", "n")
        result = balance(r)
        cols = [[str(v) for v in c] for c in result.coefficients.columns()]
        assert cols == [["-n", "-2n-1", "1", "n"]]
        assert render(result, r) == "n CO + (2n+1) H2 -> CnH2n+2 + n H2O"

    def test_chromium_complex(self):
        r = parse_reaction(
            "[Cr(N2H4CO)6]4[Cr(CN)6]3 + KMnO4 + H2SO4 "
            "-> CO2 + MnSO4 + K2Cr2O7 + KNO3 + K2SO4 + H2O"
        )
        result = balance(r)
        assert result.coefficients.columns() == [
            (-10, -1176, -1399, 420, 1176, 35, 660, 223, 1879)
        ]

    def test_quiver_path_gives_same_answer(self):
        r = parse_reaction("H2O + MnO4^- + SO3^2- -> OH^- + MnO2 + SO4^2-")
        assert (
            balance(r, use_quiver=True).coefficients
            == balance(r).coefficients
        )

    def test_conservation_per_element(self):
        r = parse_reaction(
            "[Cr(N2H4CO)6]4[Cr(CN)6]3 + KMnO4 + H2SO4 "
            "-> CO2 + MnSO4 + K2Cr2O7 + KNO3 + K2SO4 + H2O"
        )
        result = balance(r)
        col = result.coefficients.column(0)
        for sym in ("C", "Mn", "Cr", "N", "S", "H", "K", "O"):
            total = sum(
                f.composition.get(sym, 0) * c for f, c in zip(r.compounds, col)
            )
            assert total == 0

    def test_declared_coefficients_checked(self):
        ok = balance(parse_reaction("2 H2 + O2 -> 2 H2O"))
        assert not any("do not balance" in d for d in ok.diagnostics)
        bad = balance(parse_reaction("3 H2 + O2 -> 2 H2O"))
        assert any("do not balance" in d for d in bad.diagnostics)

    def test_wrong_side_placement_warns(self):
        r = parse_reaction("Fe + O2 -> FeO + Fe2O3")
        result = balance(r)
        assert not result.oriented
        assert any("wrong side" in d for d in result.diagnostics)

    def test_bare_list_sign_convention(self):
        # the first listed compound reads as a reactant
        r = parse_reaction("H2 + O2 + H2O")
        result = balance(r)
        col = result.coefficients.column(0)
        assert col == (-2, -1, 2)


class TestRender:
    def test_coefficient_one_omitted(self):
        r = parse_reaction("H2 + O2 -> H2O")
        text = render(balance(r), r)
        assert text == "2 H2 + O2 -> 2 H2O"

    def test_polynomial_coefficients_parenthesized(self):
        r = parse_reaction("CO + H2 -> CnH2n+2 + H2O", "n")
        text = render(balance(r), r)
        assert "(2n+1) H2" in text and "n CO" in text


class TestReport:
    def test_json_shape(self):
        r = parse_reaction("H2 + O2 -> H2O")
        result = balance(r)
        blob = balance_report(r, result)
        assert blob["compounds"] == ["H2", "O2", "H2O"]
        assert blob["atoms"] == ["H", "O"]
        assert blob["adjacency"] == [["2", "0", "2"], ["0", "2", "1"]]
        assert blob["basis"] == [["-2", "-1", "2"]]
        assert blob["feasible"] is True
        assert blob["equations"] == ["2 H2 + O2 -> 2 H2O"]


class TestInconsistentParameter:
    def test_mixed_ring_formulas_rejected(self):
        from dataclasses import replace

        plain = parse_reaction("CO + H2 -> CO + H2")
        alien = parse_formula("CnH2n+2", "n")
        broken = replace(plain, left=(plain.left[0], alien))
        with pytest.raises(InconsistentParameter):
            adjacency(broken)


class TestZeroCounts:
    def test_explicit_zero_count_drops_element(self):
        assert parse_formula("H0O").composition == {"O": 1}

    def test_all_zero_formula_rejected(self):
        with pytest.raises(ParseError):
            parse_formula("H0")


class TestParserTotality:
    @given(
        st.lists(
            st.tuples(
                st.sampled_from(["H", "O", "Fe", "Mn", "Cl", "Na", "Cu"]),
                st.integers(1, 99),
            ),
            min_size=1,
            max_size=4,
        ),
        st.integers(1, 9),
        st.sampled_from(["()", "[]"]),
    )
    def test_every_generated_formula_parses(self, units, group_mult, brackets):
        inner = "".join(f"{sym}{cnt}" for sym, cnt in units)
        f = parse_formula(f"{brackets[0]}{inner}{brackets[1]}{group_mult}")
        for sym, _ in units:
            expected = sum(c for s, c in units if s == sym) * group_mult
            assert f.composition[sym] == expected


class TestExactAnnihilation:
    def test_integer_adjacency_times_coefficients_is_zero(self):
        r = parse_reaction("Fe + O2 -> FeO + Fe2O3")
        result = balance(r)
        assert (adjacency(r) @ result.coefficients).is_zero_matrix()

    def test_polynomial_adjacency_times_coefficients_is_zero(self):
        r = parse_reaction("CO + H2 -> CnH2n+2 + H2O", "n")
        result = balance(r)
        assert (adjacency(r) @ result.coefficients).is_zero_matrix()
