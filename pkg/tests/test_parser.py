import pytest

from sdirac.catalog import default_catalog
from sdirac.parser import BinOp, Der, Imag, Lam, Num, ParseError, Power, Var, parse_expr, parse_poly, parse_weyl
from sdirac.scalar import LAMBDA
from sdirac.weyl import WeylElement

CAT = default_catalog()


def test_dirac_operator():
    assert parse_weyl("i*q*d_y - d_x*d_q") == CAT["howe.Ds"]


def test_o1():
    assert parse_weyl("x^2*d_x + x*y*d_y - 1/2*x*q*d_q + i/2*y*d_q^2 + 1/2*x") == CAT["sym.O1"]


def test_normal_ordering():
    assert parse_weyl("d_x*x") == parse_weyl("x*d_x + 1")
    assert parse_weyl("d_x*x") - parse_weyl("x*d_x") == WeylElement.const("x,y,q")


def test_lambda_coefficient():
    w = parse_weyl("lambda*x")
    assert w.max_lambda_degree() == 1
    assert w.coefficient((1, 0, 0), (0, 0, 0)) == LAMBDA


def test_ast_shape():
    ast = parse_expr("-x^2*d_y + i", "x,y")
    assert isinstance(ast, BinOp) and ast.op == "+"
    assert isinstance(ast.right, Imag)
    prod = ast.left
    assert isinstance(prod, BinOp) and prod.op == "*"
    assert isinstance(prod.right, Der) and prod.right.name == "y"
    neg = prod.left
    assert isinstance(neg.arg, Power) and neg.arg.exp == 2 and isinstance(neg.arg.base, Var)
    assert isinstance(parse_expr("lambda"), Lam)
    assert parse_expr("12") == Num(12, 0)


def test_whitespace_insignificant():
    assert parse_weyl(" x *  d_x+1 ") == parse_weyl("x*d_x+1")


def test_left_associative_division():
    assert parse_weyl("x/2/3") == parse_weyl("1/6*x")


def test_rational_function_coefficient():
    w = parse_weyl("(lambda + 1)/(lambda - 2)*x")
    assert parse_weyl(w.text()) == w


@pytest.mark.parametrize("src,pos", [
    ("x +", 3), ("z*x", 0), ("x $ y", 2), ("x^y", 2), ("(x", 2), ("x)", 1),
    ("d_z", 0), ("x^-1", 2), ("1/0", 1), ("x/d_x", 1), ("", 0),
])
def test_errors_carry_position(src, pos):
    with pytest.raises(ParseError) as exc:
        parse_weyl(src)
    assert exc.value.pos == pos


def test_custom_vars():
    w = parse_weyl("xh*d_yh", "xh,yh,q")
    assert w.space == ("xh", "yh", "q")
    with pytest.raises(ParseError):
        parse_weyl("x", "xh,yh,q")


def test_poly_rejects_derivative():
    assert parse_poly("x^2 + q").text() == "x^2 + q"
    with pytest.raises(ParseError):
        parse_poly("d_x")
