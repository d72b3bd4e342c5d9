"""Tests for the lexer, parser and canonical printer."""

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from src.syntax.lexer import (
    KEYWORDS,
    IllegalCharacter,
    TokenKind,
    UnterminatedComment,
    reassemble,
    tokenize,
)
from src.syntax.parser import parse
from src.syntax.printer import print_tree
from src.syntax.tree import Construct, Multiplicity, Node, SourceTree
from tests.conftest import LISTING_NAMES, read_listing

# Strategies

identifiers = st.from_regex(r"[A-Za-z_][A-Za-z0-9_]{0,5}", fullmatch=True).filter(
    lambda s: s not in KEYWORDS
)
paths = st.lists(identifiers, min_size=1, max_size=3).map(tuple)
docs = st.from_regex(r"[A-Za-z0-9]{1,8}( [A-Za-z0-9]{1,8}){0,3}", fullmatch=True)


@st.composite
def multiplicities(draw):
    lower = draw(st.integers(min_value=0, max_value=5))
    upper = draw(st.one_of(st.none(), st.integers(min_value=lower, max_value=9)))
    return Multiplicity(lower, upper)


NAMED = {
    Construct.PART_DEF,
    Construct.REQUIREMENT_DEF,
    Construct.CONNECTION_DEF,
    Construct.METADATA_DEF,
}


@st.composite
def declarations(draw, depth=0):
    construct = draw(st.sampled_from(list(Construct)))
    if construct == Construct.IMPORT:
        return Node(
            Construct.IMPORT,
            visibility=draw(st.sampled_from([None, "private", "public"])),
            import_path=draw(paths),
            wildcard=draw(st.booleans()),
        )

    children = ()
    if depth < 2:
        children = tuple(draw(st.lists(declarations(depth + 1), max_size=3)))
    doc = draw(st.one_of(st.none(), docs))

    if construct in (Construct.PACKAGE, Construct.LIBRARY_PACKAGE):
        return Node(construct, name=draw(identifiers), doc=doc, children=children)

    optional = st.one_of(st.none(), identifiers)
    name = draw(identifiers) if construct in NAMED else draw(optional)
    pair = st.one_of(st.none(), st.tuples(paths, paths))
    return Node(
        construct,
        name=name,
        hash_keyword=draw(identifiers) if construct == Construct.KEYWORD_USAGE else None,
        short_name=draw(optional) if construct == Construct.METADATA_DEF else None,
        specializes=tuple(draw(st.lists(paths, max_size=2))),
        redefines=draw(st.one_of(st.none(), paths)),
        type_name=draw(st.one_of(st.none(), paths)),
        multiplicity=draw(st.one_of(st.none(), multiplicities())),
        connect=(
            draw(pair) if construct in (Construct.CONNECTION, Construct.KEYWORD_USAGE) else None
        ),
        allocate=draw(pair) if construct == Construct.ALLOCATION else None,
        doc=doc,
        children=children,
    )


trees = st.lists(declarations(), max_size=4).map(lambda roots: SourceTree(tuple(roots)))

LEXEMES = [
    "part",
    "def",
    "connect",
    "Alpha",
    "x1",
    "#goal",
    "#dartwin",
    "42",
    ":>>",
    ":>",
    "::",
    "..",
    ":",
    "{",
    "}",
    ";",
    "[",
    "]",
    "*",
    "/* note */",
    "// remark\n",
]


class TestTokenize:
    def test_keywords_identifiers_and_punctuation(self):
        tokens = tokenize("part a;")
        assert [t.kind for t in tokens] == [
            TokenKind.KEYWORD,
            TokenKind.IDENTIFIER,
            TokenKind.PUNCTUATION,
        ]
        assert [t.text for t in tokens] == ["part", "a", ";"]

    def test_hash_keyword_value_drops_prefix(self):
        tokens = tokenize("#dartwin Basic")
        assert tokens[0].kind == TokenKind.HASH_KEYWORD
        assert tokens[0].value == "dartwin"

    def test_longest_punctuation_wins(self):
        tokens = tokenize("a :>> b :> c : d")
        assert [t.text for t in tokens if t.kind == TokenKind.PUNCTUATION] == [":>>", ":>", ":"]

    def test_multiplicity_tokens(self):
        tokens = tokenize("[1..*]")
        assert [t.text for t in tokens] == ["[", "1", "..", "*", "]"]
        assert tokens[1].kind == TokenKind.NUMBER

    def test_doc_comment_value_is_stripped(self):
        tokens = tokenize("doc /*  Goal 1 */")
        assert tokens[1].kind == TokenKind.DOC_COMMENT
        assert tokens[1].value == "Goal 1"

    def test_line_comment(self):
        tokens = tokenize("part a; // trailing\n")
        assert tokens[-1].kind == TokenKind.LINE_COMMENT
        assert tokens[-1].value == "trailing"
        assert tokens[-1].trailing == "\n"

    def test_whitespace_only_yields_no_tokens(self):
        assert tokenize("  \n\t ") == []

    def test_spans_are_one_based(self):
        tokens = tokenize("a\n  b")
        assert (tokens[1].span.line, tokens[1].span.column) == (2, 3)
        assert (tokens[1].span.start, tokens[1].span.end) == (4, 5)

    def test_offsets_count_characters_not_bytes(self):
        text = "doc /* é */ part b;"
        token = [t for t in tokenize(text) if t.kind == TokenKind.IDENTIFIER][0]
        assert token.span.start == text.index("b") == 17
        assert token.span.column == 18
        assert len(text[: token.span.start].encode("utf-8")) == 18

    def test_illegal_character_raises(self):
        with pytest.raises(IllegalCharacter) as exc:
            tokenize("part a @;")
        assert exc.value.span.column == 8
        assert exc.value.char == "@"

    def test_unterminated_comment_raises(self):
        with pytest.raises(UnterminatedComment):
            tokenize("part a; /* open")

    def test_errors_are_collected_when_requested(self):
        errors = []
        tokens = tokenize("part a @;", errors=errors)
        assert [e.code for e in errors] == ["IllegalCharacter"]
        assert reassemble(tokens) == "part a @;"

    @pytest.mark.parametrize("name", LISTING_NAMES)
    def test_listings_are_lossless(self, name):
        text = read_listing(name)
        assert reassemble(tokenize(text)) == text

    @settings(max_examples=150, deadline=None)
    @given(
        st.lists(
            st.tuples(st.sampled_from(["", " ", "\n", "\t  "]), st.sampled_from(LEXEMES)),
            min_size=1,
            max_size=30,
        ),
        st.sampled_from(["", " ", "\n"]),
    )
    def test_generated_streams_are_lossless(self, pieces, tail):
        text = "".join(trivia + lexeme for trivia, lexeme in pieces) + tail
        assert reassemble(tokenize(text)) == text


class TestParse:
    @pytest.mark.parametrize("name", LISTING_NAMES)
    def test_listings_parse_without_diagnostics(self, name):
        tree = parse(read_listing(name), f"{name}.dartwin")
        assert tree.diagnostics == ()
        assert len(tree.roots) == 1

    def test_basic_structure(self, listing):
        root = parse(listing("basic")).roots[0]
        assert root.construct == Construct.KEYWORD_USAGE
        assert root.hash_keyword == "dartwin"
        assert root.name == "Basic"
        assert [c.name for c in root.children] == ["TwinSystem", "AT", "Goal1", "a1"]

        goal = root.children[2]
        assert goal.doc == "Goal 1"
        allocation = root.children[3]
        assert allocation.allocate == (("Goal1",), ("TwinSystem", "DT1"))

    def test_connection_paths(self, listing):
        system = parse(listing("basic")).roots[0].children[0]
        c1 = system.children[1]
        assert c1.construct == Construct.CONNECTION
        assert c1.connect == (("Basic", "AT", "ts1"), ("DT1", "p11"))

    def test_redefinition_without_name(self, listing):
        dartrans = parse(listing("orthogonal_with_new_output")).roots[0]
        after = dartrans.children[2]
        assert after.specializes == (("Basic",),)
        system = after.children[0]
        assert system.name is None
        assert system.redefines == ("TwinSystem",)
        assert system.display_name == "TwinSystem"

    def test_tail_in_any_order(self):
        first = parse("part a[2] : T :> B;").roots[0]
        second = parse("part a :> B : T[2];").roots[0]
        assert first == second
        assert first.multiplicity == Multiplicity(2, 2)
        assert first.type_name == ("T",)

    def test_double_colon_paths(self):
        node = parse("part a :> Lib::Base;").roots[0]
        assert node.specializes == (("Lib", "Base"),)

    def test_imports(self):
        tree = parse("package P { private import Lib::*; import A::B; }")
        wildcard, single = tree.roots[0].children
        assert wildcard.visibility == "private"
        assert wildcard.import_path == ("Lib",)
        assert wildcard.wildcard is True
        assert single.import_path == ("A", "B")
        assert single.wildcard is False

    def test_metadata_def_short_name(self):
        node = parse("metadata def <goal> GoalMetadata;").roots[0]
        assert node.construct == Construct.METADATA_DEF
        assert node.short_name == "goal"
        assert node.name == "GoalMetadata"

    def test_conflict_usage_with_connect(self):
        node = parse("#vs clash connect G1 to G2 { doc /* both cannot hold */ }").roots[0]
        assert node.hash_keyword == "vs"
        assert node.connect == (("G1",), ("G2",))
        assert node.doc == "both cannot hold"

    def test_bare_allocate_and_connect(self):
        roots = parse("allocate G to DT; connect a.p to b.q;").roots
        assert roots[0].construct == Construct.ALLOCATION
        assert roots[0].name is None
        assert roots[1].construct == Construct.CONNECTION
        assert roots[1].connect == (("a", "p"), ("b", "q"))

    def test_block_comment_outside_doc_is_ignored(self):
        tree = parse("part a { /* note */ port p; }")
        assert tree.diagnostics == ()
        assert tree.roots[0].doc is None


class TestParseDiagnostics:
    def test_missing_semicolon(self):
        tree = parse("part a", "m.dartwin")
        assert len(tree.diagnostics) == 1
        diagnostic = tree.diagnostics[0]
        assert diagnostic.message == "expected '{' or ';', found end of input"
        assert diagnostic.format().startswith("m.dartwin:1:7: error:")

    def test_unsupported_construct_recovers(self):
        tree = parse("state def S;\npart b;")
        assert [d.message for d in tree.diagnostics] == ["unsupported SysML v2 construct 'state'"]
        assert [r.name for r in tree.roots] == ["b"]
        assert tree.diagnostics[0].span.line == 1

    def test_doc_outside_body(self):
        tree = parse("doc /* stray */")
        assert tree.diagnostics[0].message == "doc comment outside of a body"

    def test_duplicate_multiplicity(self):
        tree = parse("part a[1][2];")
        assert tree.diagnostics[0].message == "duplicate multiplicity"

    def test_inverted_bounds(self):
        tree = parse("part a[3..1];")
        assert tree.diagnostics[0].message == "multiplicity upper bound 1 below 3"

    def test_unclosed_body(self):
        tree = parse("part a { port p;")
        assert tree.diagnostics[0].message == "expected '}', found end of input"

    def test_illegal_character_becomes_diagnostic(self):
        tree = parse("part a; part b $;\npart c;")
        assert [d.code for d in tree.diagnostics] == ["IllegalCharacter"]
        assert [r.name for r in tree.roots] == ["a", "b", "c"]

    def test_errors_after_a_mutation(self, listing):
        text = listing("basic").replace("port p12;", "port p12")
        tree = parse(text)
        assert len(tree.diagnostics) == 1
        assert tree.diagnostics[0].span.line == 6

    def test_second_doc_warns(self):
        tree = parse("#goal G { doc /* a */ doc /* b */ }")
        assert [d.code for d in tree.diagnostics] == ["DuplicateDoc"]
        assert not tree.diagnostics[0].is_error
        assert tree.diagnostics[0].span.start == 26
        assert tree.roots[0].doc == "a"

    @settings(max_examples=100, deadline=None)
    @given(st.data())
    def test_illegal_token_is_reported_in_place(self, data):
        text = read_listing("basic")
        tokens = [
            t
            for t in tokenize(text)
            if t.kind not in (TokenKind.DOC_COMMENT, TokenKind.LINE_COMMENT)
        ]
        token = data.draw(st.sampled_from(tokens))
        start = token.span.start
        mutated = text[:start] + "$" + text[token.span.end :]
        diagnostics = parse(mutated).diagnostics
        assert any(d.is_error for d in diagnostics)
        assert any(start <= d.span.start and d.span.end <= start + 1 for d in diagnostics)


class TestPrint:
    def test_empty_tree(self):
        assert print_tree(SourceTree()) == ""

    def test_canonical_layout(self):
        text = "#goal G{doc/*Keep it level*/}  part  A{port p;port q;}"
        assert print_tree(parse(text)) == (
            "#goal G {\n"
            "    doc /* Keep it level */\n"
            "}\n"
            "part A {\n"
            "    port p;\n"
            "    port q;\n"
            "}\n"
        )

    def test_multiplicity_forms(self):
        text = "part a[*]; part b[1]; part c[0..2]; part d[1..*];"
        assert print_tree(parse(text)) == (
            "part a[*];\npart b[1];\npart c[0..2];\npart d[1..*];\n"
        )

    def test_import_keeps_double_colon(self):
        assert print_tree(parse("public import Lib.Base::*;")) == "public import Lib::Base::*;\n"

    def test_bare_allocate_prints_short_form(self):
        assert print_tree(parse("allocation allocate G to DT;")) == "allocate G to DT;\n"

    @pytest.mark.parametrize("name", LISTING_NAMES)
    def test_listing_round_trip(self, name):
        tree = parse(read_listing(name))
        printed = print_tree(tree)
        reparsed = parse(printed)
        assert reparsed.diagnostics == ()
        assert reparsed == tree
        assert print_tree(reparsed) == printed

    @settings(max_examples=120, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    @given(trees)
    def test_generated_round_trip(self, tree):
        printed = print_tree(tree)
        reparsed = parse(printed)
        assert reparsed.diagnostics == ()
        assert reparsed == tree
