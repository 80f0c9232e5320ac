"""Command-line front end: exact checks on quivers with potentials.

Potentials travel as JSON with every number an exact scalar string:

    {"conductor": 4,
     "vertices": ["v"],
     "arrows": [{"name": "x0", "tail": "v", "head": "v"}, ...],
     "degree": 4,
     "terms": [{"word": ["x0", "x1", "x0", "x1"], "coeff": "-1/4"}, ...],
     "twist": {"vertices": {"v": "v"},
               "arrows": {"x0": [{"arrow": "x1", "coeff": "1"}]}}}

``twist`` is optional (identity when absent).  A presentation file replaces
``terms`` with ``relations``: a list of term lists, one per relation, with
``degree`` the relation degree.  Exit status is 0 for a passing check, 1 for
a failing one, and 2 for unreadable input.
"""
from __future__ import annotations

import json
import math
import os
from typing import Iterable, Sequence

import click

from .field import CycField, CycNum, Matrix, parse_cyc
from .paths import (Path, Quiver, TensorElement, Twist, delta_image, derive,
                    is_superpotential)
from .quotient import (Presentation, derivation_quotient, graded_dims,
                       koszul_dual, normal_basis)
from . import complexes as cx
from . import mckay as mk
from . import sklyanin as sk


# ---------------------------------------------------------------------------
# JSON schema
# ---------------------------------------------------------------------------

def quiver_from_json(obj) -> tuple[Quiver, CycField]:
    f = CycField(int(obj["conductor"]))
    q = Quiver([str(v) for v in obj["vertices"]],
               [(a["name"], a["tail"], a["head"]) for a in obj["arrows"]])
    return q, f


def quiver_to_json(q: Quiver, f: CycField) -> dict:
    return {
        "conductor": f.N,
        "vertices": list(q.vertices),
        "arrows": [{"name": a.name, "tail": q.vertices[a.tail],
                    "head": q.vertices[a.head]} for a in q.arrows],
    }


def element_from_terms(terms, q: Quiver, f: CycField, degree: int
                       ) -> TensorElement:
    out: dict = {}
    for t in terms:
        word = [str(w) for w in t["word"]]
        if len(word) != degree:
            raise ValueError(f"term word {word} does not have degree {degree}")
        key = q.path(*word).key
        c = parse_cyc(str(t["coeff"]), f)
        out[key] = out[key] + c if key in out else c
    return TensorElement(q, f, degree, {k: c for k, c in out.items() if c})


def element_terms_json(x: TensorElement) -> list[dict]:
    q = x.quiver
    return [{"word": [q.arrows[a].name for a in p.key],
             "coeff": str(x.terms[p.key])} for p in x.support()]


def twist_from_json(obj, q: Quiver, f: CycField) -> Twist:
    vmap = obj.get("vertices", {})
    perm = [q.vertex_index[vmap.get(v, v)] for v in q.vertices]
    amap = obj.get("arrows", {})
    images = []
    for a in q.arrows:
        spec = amap.get(a.name)
        if spec is None:
            images.append(TensorElement.monomial(q, f, (a.name,), f.one))
            continue
        img = TensorElement(q, f, 1, {})
        for part in spec:
            img = img + TensorElement.monomial(
                q, f, (str(part["arrow"]),), parse_cyc(str(part["coeff"]), f))
        images.append(img)
    return Twist(q, f, perm, images)


def twist_to_json(tw: Twist) -> dict:
    q = tw.quiver
    return {
        "vertices": {v: q.vertices[tw.vertex_perm[i]]
                     for i, v in enumerate(q.vertices)},
        "arrows": {a.name: [{"arrow": q.arrows[k[0]].name, "coeff": str(c)}
                            for k, c in tw.arrow_images[i].terms.items()]
                   for i, a in enumerate(q.arrows)},
    }


def potential_from_json(obj) -> tuple[TensorElement, Twist | None]:
    q, f = quiver_from_json(obj)
    x = element_from_terms(obj["terms"], q, f, int(obj["degree"]))
    tw = twist_from_json(obj["twist"], q, f) if obj.get("twist") else None
    return x, tw


def potential_to_json(x: TensorElement, tw: Twist | None = None) -> dict:
    out = quiver_to_json(x.quiver, x.field)
    out["degree"] = x.degree
    out["terms"] = element_terms_json(x)
    if tw is not None:
        out["twist"] = twist_to_json(tw)
    return out


def presentation_from_json(obj) -> Presentation:
    q, f = quiver_from_json(obj)
    d = int(obj["degree"])
    rels = [element_from_terms(r, q, f, d) for r in obj["relations"]]
    return Presentation(q, f, d, rels)


def presentation_to_json(pres: Presentation) -> dict:
    out = quiver_to_json(pres.quiver, pres.field)
    out["degree"] = pres.degree
    out["relations"] = [element_terms_json(r)
                        for r in pres.relation_elements()]
    return out


# ---------------------------------------------------------------------------
# rendering and parsing
# ---------------------------------------------------------------------------

def _fmt_sum(pairs: Iterable[tuple[CycNum, str]], f: CycField) -> str:
    bits = []
    for c, label in pairs:
        if c == f.one:
            bits.append(("+", label))
        elif c == -1:
            bits.append(("-", label))
        else:
            cs = str(c)
            if cs.startswith("-") and ("+" not in cs and " - " not in cs):
                sign, cs = "-", cs[1:]
            else:
                sign = "+"
            if (" " in cs) or ("+" in cs):
                cs = f"({cs})"
            bits.append((sign, f"{cs}*{label}"))
    if not bits:
        return "0"
    first_sign, first = bits[0]
    out = first if first_sign == "+" else f"-{first}"
    for sign, b in bits[1:]:
        out += f" {sign} {b}"
    return out


def render_potential(x: TensorElement, twist: Twist | None = None,
                     mode: str = "full") -> str:
    """Text form of a potential.

    ``full`` lists every monomial in canonical path order (the inverse of
    :func:`parse_element`).  ``cyclic`` lists one representative per orbit
    of the twisted cyclic shift, requiring the element to be a (twisted)
    superpotential whose twist sends each support arrow to a scalar multiple
    of a single arrow; the displayed coefficient is the representative's
    coefficient scaled by (orbit size) / (degree x twist order on the
    orbit), so each displayed term stands for its whole shift orbit.
    """
    if mode == "full":
        return x.render()
    if mode != "cyclic":
        raise ValueError("mode must be 'full' or 'cyclic'")
    n, f, q = x.degree, x.field, x.quiver
    if n < 1:
        raise ValueError("cyclic rendering needs degree >= 1")
    tagged = twist is not None and not twist.is_identity
    letter: dict[int, tuple[int, CycNum]] = {}
    for p in x.support():
        for a in p.key:
            if a in letter:
                continue
            if twist is None:
                letter[a] = (a, f.one)
                continue
            img = twist.arrow_image(a)
            if len(img.terms) != 1:
                raise ValueError("cyclic rendering requires a monomial twist")
            (bkey, c), = img.terms.items()
            letter[a] = (bkey[0], c)
    if not is_superpotential(x, twist):
        raise ValueError("cyclic rendering requires a (twisted) "
                         "superpotential")

    def letter_period(a: int) -> int:
        b, c, k = a, f.one, 0
        while True:
            nb, nc = letter[b]
            b, c, k = nb, c * nc, k + 1
            if b == a and c == f.one:
                return k
            if k > 4096:
                raise ValueError("twist order too large on the support")

    idx = q.path_index(n)
    seen: set = set()
    orbits = []
    for p in x.support():
        w = p.key
        if w in seen:
            continue
        words = [w]
        cur = w
        while True:
            cur = (letter[cur[-1]][0],) + cur[:-1]
            if cur == w:
                break
            words.append(cur)
        seen.update(words)
        L = len(words)
        m = 1
        for a in {a for ww in words for a in ww}:
            m = math.lcm(m, letter_period(a))
        K = n * m
        rep = min(words, key=idx.__getitem__)
        c = x.coefficient(rep) * f.from_rational(f"{L}/{K}")
        label = f"({q.render_word(rep)})" + ("^tau" if tagged else "")
        orbits.append((idx[rep], c, label))
    orbits.sort(key=lambda t: t[0])
    return _fmt_sum(((c, lab) for _, c, lab in orbits), f)


def _split_signed(text: str) -> list[tuple[int, str]]:
    """Split a rendered sum into (sign, chunk) pieces at top-level +/-."""
    text = text.strip()
    if not text:
        raise ValueError("empty element text")
    sign, i = 1, 0
    if text[0] == "+":
        i = 1
    elif text[0] == "-":
        sign, i = -1, 1
    chunks, cur, depth = [], [], 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if (depth == 0 and ch in "+-" and i > 0 and text[i - 1] == " "
                and i + 1 < len(text) and text[i + 1] == " "):
            chunks.append((sign, "".join(cur).strip()))
            sign = 1 if ch == "+" else -1
            cur = []
            i += 2
            continue
        cur.append(ch)
        i += 1
    chunks.append((sign, "".join(cur).strip()))
    return chunks


def _split_stars(chunk: str) -> list[str]:
    toks, cur, depth = [], [], 0
    for ch in chunk:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "*" and depth == 0:
            toks.append("".join(cur))
            cur = []
            continue
        cur.append(ch)
    toks.append("".join(cur))
    return toks


def parse_element(text: str, q: Quiver, f: CycField, degree: int
                  ) -> TensorElement:
    """Inverse of the full rendering: canonical text back to an element."""
    text = text.strip()
    if text == "0":
        return TensorElement(q, f, degree, {})
    multi = any(len(a.name) > 1 for a in q.arrows)
    terms: dict = {}
    for sign, chunk in _split_signed(text):
        toks = _split_stars(chunk)
        if degree == 0:
            word_toks = [toks[-1]]
            if not (word_toks[0].startswith("e(") and word_toks[0].endswith(")")):
                raise ValueError(f"bad degree-0 term {chunk!r}")
            key = q.vertex_path(word_toks[0][2:-1]).key
            coeff_toks = toks[:-1]
        elif multi:
            if len(toks) < degree:
                raise ValueError(f"term {chunk!r} shorter than degree {degree}")
            names = toks[-degree:]
            key = q.path(*names).key
            coeff_toks = toks[:-degree]
        else:
            word = toks[-1]
            if len(word) != degree:
                raise ValueError(f"term word {word!r} does not have "
                                 f"degree {degree}")
            key = q.path(*word).key
            coeff_toks = toks[:-1]
        cs = "*".join(coeff_toks).strip()
        if not cs:
            c = f.one
        else:
            if cs.startswith("(") and cs.endswith(")"):
                cs = cs[1:-1]
            c = parse_cyc(cs, f)
        c = c if sign > 0 else -c
        terms[key] = terms[key] + c if key in terms else c
    return TensorElement(q, f, degree, {k: c for k, c in terms.items() if c})


# ---------------------------------------------------------------------------
# command plumbing
# ---------------------------------------------------------------------------

def _read_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise click.UsageError(f"cannot read {path}: {e}")


def _load_potential(path: str) -> tuple[TensorElement, Twist | None]:
    obj = _read_json(path)
    try:
        return potential_from_json(obj)
    except (KeyError, TypeError, ValueError) as e:
        raise click.UsageError(f"bad potential file {path}: {e}")


def _load_presentation(path: str, order: int | None) -> Presentation:
    obj = _read_json(path)
    try:
        if "relations" in obj:
            return presentation_from_json(obj)
        x, _ = potential_from_json(obj)
        k = x.degree - 2 if order is None else order
        if not 0 <= k < x.degree:
            raise ValueError(f"derivation order {k} out of range for "
                             f"degree {x.degree}")
        return derivation_quotient(x, k)
    except (KeyError, TypeError, ValueError) as e:
        raise click.UsageError(f"bad input file {path}: {e}")


def _emit(ctx, payload: dict, lines: Sequence[str]) -> None:
    if ctx.obj["fmt"] == "json":
        click.echo(json.dumps(payload, indent=1, default=str))
    else:
        for line in lines:
            click.echo(line)


@click.group()
@click.option("--format", "fmt", type=click.Choice(["text", "json"]),
              default="text", help="Output as lines of text or one JSON "
              "object.")
@click.version_option(package_name="artifact", prog_name="quiverpot")
@click.pass_context
def main(ctx, fmt):
    """Exact computer algebra for quivers with (twisted) superpotentials."""
    ctx.ensure_object(dict)
    ctx.obj["fmt"] = fmt


@main.command("check-superpotential")
@click.option("--in", "infile", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Potential JSON file.")
@click.pass_context
def check_superpotential(ctx, infile):
    """Verify the (twisted) supercyclic symmetry of a potential file."""
    x, tw = _load_potential(infile)
    ok = is_superpotential(x, tw)
    payload = {"ok": ok, "degree": x.degree, "terms": len(x.terms),
               "twisted": tw is not None and not tw.is_identity}
    verdict = "PASS" if ok else "FAIL"
    _emit(ctx, payload, [
        f"degree {x.degree} potential, {len(x.terms)} terms, "
        f"{'twisted' if payload['twisted'] else 'untwisted'}",
        f"superpotential check: {verdict}",
    ])
    if not ok:
        ctx.exit(1)


@main.command("derive")
@click.option("--in", "infile", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Potential JSON file.")
@click.option("--order", default=1, show_default=True,
              help="Derivative order (relations have degree - order).")
@click.pass_context
def derive_cmd(ctx, infile, order):
    """Print the canonical relation basis of a derivation quotient."""
    x, _ = _load_potential(infile)
    if not 0 <= order < x.degree:
        raise click.UsageError(f"order must lie in [0, {x.degree - 1}]")
    pres = derivation_quotient(x, order)
    rels = pres.relation_elements()
    payload = {"degree": x.degree, "order": order, "count": len(rels),
               "relations": [r.render() for r in rels]}
    lines = [f"{len(rels)} relations of degree {x.degree - order}:"]
    lines += [f"  {r.render()}" for r in rels]
    _emit(ctx, payload, lines)


@main.command()
@click.option("--in", "infile", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Presentation (or potential) JSON file.")
@click.option("--dmax", default=4, show_default=True)
@click.option("--order", default=None, type=int,
              help="Derivative order when the input is a potential "
              "[default: degree - 2].")
@click.pass_context
def hilbert(ctx, infile, dmax, order):
    """Graded dimensions of a derivation-quotient algebra."""
    if dmax < 0:
        raise click.UsageError("dmax must be >= 0")
    pres = _load_presentation(infile, order)
    dims = graded_dims(pres, dmax)
    _emit(ctx, {"dims": dims}, [" ".join(str(d) for d in dims)])


@main.command("koszul-dual")
@click.option("--in", "infile", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Quadratic presentation (or potential) JSON file.")
@click.option("--dmax", default=5, show_default=True)
@click.option("--order", default=None, type=int,
              help="Derivative order when the input is a potential.")
@click.pass_context
def koszul_dual_cmd(ctx, infile, dmax, order):
    """Graded dimensions of the quadratic dual presentation."""
    pres = _load_presentation(infile, order)
    try:
        dual = koszul_dual(pres)
    except ValueError as e:
        raise click.UsageError(str(e))
    dims = graded_dims(dual, dmax)
    payload = {"dims": dims, "relations": dual.relations.dim}
    _emit(ctx, payload, [" ".join(str(d) for d in dims)])


@main.command("complex-check")
@click.option("--in", "infile", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Potential JSON file.")
@click.option("--nth", default=2, show_default=True,
              help="2 builds the ordinary self-dual complex; larger N "
              "builds the d^N = 0 complex.")
@click.option("--dmax", default=4, show_default=True,
              help="Largest certified total degree.")
@click.option("--mode", type=click.Choice(["auto", "exact", "modular"]),
              default="auto", show_default=True)
@click.pass_context
def complex_check(ctx, infile, nth, dmax, mode):
    """Build and certify the (self-dual or N-)complex of a potential."""
    x, tw = _load_potential(infile)
    if nth < 2:
        raise click.UsageError("nth must be >= 2")
    try:
        pres = derivation_quotient(x, x.degree - 2)
        if nth == 2:
            c = cx.build_selfdual_complex(x, pres, dmax, tw)
        else:
            c = cx.build_ncomplex(x, nth, pres, dmax, tw)
    except ValueError as e:
        raise click.UsageError(f"cannot build the complex: {e}")
    rep = cx.certify_complex(c, mode=mode)
    lines = [f"{rep['kind']} complex, N = {rep['N']}, "
             f"term dims {rep['w_dims']}"]
    for d in range(rep["dmax"] + 1):
        e = rep["degrees"][d]
        verdict = "PASS" if e["pass"] else "FAIL"
        lines.append(f"  degree {d}: dims {e['dims']} "
                     f"[{e['mode']}] {verdict}")
    lines.append(f"certified (degrees <= {rep['dmax']}): "
                 f"{'PASS' if rep['all_pass'] else 'FAIL'}")
    _emit(ctx, rep, lines)
    if not rep["all_pass"]:
        ctx.exit(1)


def _block_dims(pres: Presentation, d: int) -> list[list[int]]:
    k = pres.quiver.n_vertices
    out = [[0] * k for _ in range(k)]
    for p in normal_basis(pres, d):
        out[p.tail][p.head] += 1
    return out


@main.command()
@click.option("--input", "source", required=True,
              help="Group JSON file, or the name of a packaged fixture.")
@click.option("--degree-check", default=4, show_default=True,
              help="Compare graded dimensions with the invariant-theory "
              "count up to this degree.")
@click.pass_context
def mckay(ctx, source, degree_check):
    """McKay quiver, potential, and relations of a finite matrix group."""
    if os.path.exists(source):
        obj = _read_json(source)
    else:
        try:
            obj = mk.load_fixture(source)
        except FileNotFoundError:
            raise click.UsageError(
                f"{source} is neither a file nor one of the packaged "
                f"fixtures {', '.join(mk.fixture_names())}")
    try:
        group, data = mk.mckay_from_json(obj)
    except (KeyError, TypeError, ValueError) as e:
        raise click.UsageError(f"bad group input: {e}")
    if not group.irreps:
        raise click.UsageError("group input carries no irreducible "
                               "representation data (add irreps or "
                               "abelian: true)")
    q = data.quiver
    omega, tau = mk.mckay_potential(data)
    pres = derivation_quotient(omega, data.n - 2)
    tau_id = tau.is_identity

    lines = [f"group of order {group.order} in GL_{data.n}, "
             f"{len(group.irreps)} irreducibles",
             "vertices: " + " ".join(
                 f"{nm}({dm})" for nm, dm in zip(data.names, data.dims)),
             "arrows:"]
    lines += [f"  {a.name}: {q.vertices[a.tail]} -> {q.vertices[a.head]}"
              for a in q.arrows]
    tmap = ", ".join(f"{v} -> {q.vertices[data.T[i]]}"
                     for i, v in enumerate(q.vertices))
    lines.append(f"determinant twist on vertices: {tmap}")
    if tau_id:
        lines.append("tau: identity")
    else:
        lines.append("tau:")
        lines += [f"  {a.name} -> {tau.arrow_image(i).render()}"
                  for i, a in enumerate(q.arrows)]
    lines.append(f"potential ({len(omega.terms)} terms, degree {data.n}):")
    lines.append(f"  {render_potential(omega)}")
    cyc = render_potential(omega, None if tau_id else tau, mode="cyclic")
    lines.append(f"cyclic form: {cyc}")

    rel_lines = []
    for p in q.paths(data.n - 2):
        r = derive(p, omega)
        if not r.is_zero():
            rel_lines.append((repr(p), r.render()))
    lines.append(f"relations (dimension {pres.relations.dim}):")
    lines += [f"  d[{nm}] = {rr}" for nm, rr in rel_lines]

    molien_ok = True
    mol_rows = []
    for d in range(degree_check + 1):
        match = mk.molien_multiplicities(group, d) == _block_dims(pres, d)
        molien_ok = molien_ok and match
        mol_rows.append(match)
        lines.append(f"molien cross-check degree {d}: "
                     f"{'PASS' if match else 'FAIL'}")
    lines.append(f"mckay check: {'PASS' if molien_ok else 'FAIL'}")

    payload = {
        "order": group.order, "n": data.n,
        "vertices": [{"name": nm, "dim": dm}
                     for nm, dm in zip(data.names, data.dims)],
        "arrows": [{"name": a.name, "tail": q.vertices[a.tail],
                    "head": q.vertices[a.head]} for a in q.arrows],
        "determinant_twist": {v: q.vertices[data.T[i]]
                              for i, v in enumerate(q.vertices)},
        "tau_identity": tau_id,
        "potential": render_potential(omega),
        "potential_cyclic": cyc,
        "relation_dim": pres.relations.dim,
        "relations": {nm: rr for nm, rr in rel_lines},
        "molien": {d: ok for d, ok in enumerate(mol_rows)},
        "ok": molien_ok,
    }
    _emit(ctx, payload, lines)
    if not molien_ok:
        ctx.exit(1)


@main.command()
@click.option("--alpha", default=None, help="Exact scalar string.")
@click.option("--beta", default=None, help="Exact scalar string.")
@click.option("--gamma", default=None,
              help="Exact scalar string [default: solved from alpha, beta].")
@click.option("--theta", nargs=4, default=None,
              help="Four exact scalar strings; overrides alpha/beta/gamma.")
@click.option("--conductor", default=1, show_default=True,
              help="Cyclotomic conductor for parsing the scalar strings.")
@click.option("--dmax", default=4, show_default=True)
@click.option("--certify", is_flag=True,
              help="Also build and certify the self-dual complex.")
@click.option("--staff", "variant", default=None,
              type=click.Choice(sk.STAFF_VARIANTS),
              help="Report a modified (twisted) variant instead.")
@click.pass_context
def sklyanin(ctx, alpha, beta, gamma, theta, conductor, dmax, certify,
             variant):
    """Exact data of a 4-generator surface point (or a modified variant)."""
    f = CycField(conductor)

    def scalar(s):
        try:
            return parse_cyc(str(s), f)
        except ValueError as e:
            raise click.UsageError(f"bad scalar {s!r}: {e}")

    try:
        if theta:
            tt = sk.ThetaTuple(*(scalar(s) for s in theta))
            params = tt.params()
        elif alpha is not None and beta is not None:
            if gamma is None:
                params = sk.SklyaninParams(scalar(alpha), scalar(beta),
                                           sk.solve_gamma(scalar(alpha),
                                                          scalar(beta)))
            else:
                params = sk.SklyaninParams(scalar(alpha), scalar(beta),
                                           scalar(gamma))
        else:
            raise click.UsageError("give --alpha/--beta[/--gamma] or --theta")
    except ValueError as e:
        raise click.UsageError(str(e))

    lines = [f"parameters: {params!r}"]
    payload: dict = {"alpha": str(params.alpha), "beta": str(params.beta),
                     "gamma": str(params.gamma)}
    ok = True
    if variant is None:
        kappa = sk.sklyanin_kappa(params)
        omega = sk.sklyanin_potential(params)
        pres = sk.sklyanin_presentation(params)
        dims = graded_dims(pres, dmax)
        ladder = [delta_image(omega, k).dim for k in range(5)]
        rep = cx.selfduality_report(omega)
        ok = rep["ok"]
        payload.update({
            "kappa": [str(k) for k in kappa],
            "dims": dims, "ladder": ladder,
            "selfduality": rep["ok"],
        })
        lines += [
            "kappa: " + ", ".join(str(k) for k in kappa),
            "graded dims: " + " ".join(str(d) for d in dims),
            "derivative ladder dims: " + " ".join(str(d) for d in ladder),
            f"self-duality identities: {'PASS' if rep['ok'] else 'FAIL'}",
        ]
        if certify:
            c = cx.build_selfdual_complex(omega, pres, dmax)
            crep = cx.certify_complex(c)
            ok = ok and crep["all_pass"]
            payload["certified"] = crep["all_pass"]
            lines.append(f"complex certification (degrees <= {dmax}): "
                         f"{'PASS' if crep['all_pass'] else 'FAIL'}")
    else:
        try:
            pres, sigma, om = sk.staff_presentation(variant, params, 1, 1)
        except ValueError as e:
            raise click.UsageError(str(e))
        dims = graded_dims(pres, min(dmax, 3))
        payload.update({"variant": variant, "dims": dims})
        lines.append(f"variant {variant}: graded dims "
                     + " ".join(str(d) for d in dims))
        if om is not None:
            lam = sk.staff_lambda(variant, params, 1, 1)
            sup = is_superpotential(om, sigma)
            ok = sup
            payload.update({"lambda": [str(x) for x in lam],
                            "twisted_superpotential": sup})
            lines += ["lambda: " + ", ".join(str(x) for x in lam),
                      f"twisted superpotential: {'PASS' if sup else 'FAIL'}"]
        else:
            cand = sk.twisted_superpotential_space(pres, sigma, 4)
            ok = cand.dim == 1
            payload["candidate_dim"] = cand.dim
            lines.append(f"twisted candidate space dim: {cand.dim}")
    _emit(ctx, payload, lines)
    if not ok:
        ctx.exit(1)


@main.group()
def fixtures():
    """Operations on the packaged fixture corpus."""


@fixtures.command("run-all")
@click.option("--degree-check", default=4, show_default=True)
@click.pass_context
def run_all(ctx, degree_check):
    """Re-derive and check every packaged fixture plus the built-in
    surface-point and modified-variant constructions."""
    checks: list[tuple[str, bool, str]] = []

    for name in mk.fixture_names():
        obj = mk.load_fixture(name)
        if not (obj.get("irreps") or obj.get("abelian")):
            checks.append(_check_symmetry_fixture(obj, name))
            continue
        try:
            group, data = mk.mckay_from_json(obj)
            omega, tau = mk.mckay_potential(data)
            pres = derivation_quotient(omega, data.n - 2)
            mol = all(
                mk.molien_multiplicities(group, d) == _block_dims(pres, d)
                for d in range(degree_check + 1))
            detail = (f"order {group.order}, {data.quiver.n_vertices} "
                      f"vertices, {data.quiver.n_arrows} arrows, relations "
                      f"dim {pres.relations.dim}, molien d<={degree_check} "
                      f"{'ok' if mol else 'MISMATCH'}")
            checks.append((name, mol, detail))
        except ValueError as e:
            checks.append((name, False, f"error: {e}"))

    checks.append(_check_surface_point())
    for variant in sk.STAFF_VARIANTS:
        checks.append(_check_staff_variant(variant))

    ok = all(c[1] for c in checks)
    lines = [f"{name}: {'PASS' if good else 'FAIL'}  {detail}"
             for name, good, detail in checks]
    lines.append(f"fixture corpus: {'PASS' if ok else 'FAIL'} "
                 f"({len(checks)} checks)")
    payload = {"ok": ok, "checks": [
        {"name": n, "ok": g, "detail": d} for n, g, d in checks]}
    _emit(ctx, payload, lines)
    if not ok:
        ctx.exit(1)


def _check_symmetry_fixture(obj: dict, name: str) -> tuple[str, bool, str]:
    """A generator-only fixture: closure order plus potential symmetry."""
    try:
        group = mk.group_from_json(obj)
        f = group.field
        theta = obj.get("theta")
        if theta is None:
            return (name, True, f"order {group.order} (no potential data)")
        ft = CycField(int(obj.get("theta_conductor", f.N)))
        tt = sk.ThetaTuple(*(parse_cyc(s, ft) for s in theta))
        omega = sk.sklyanin_potential(tt.params())
        q = omega.quiver
        kept = sum(1 for e in group.elements
                   if Twist.from_matrix(q, f, e).apply(omega) == omega)
        back = sk.recover_parameters(omega)
        good = kept == group.order and back == tt.params()
        return (name, good,
                f"order {group.order}, potential preserved by {kept}, "
                f"parameters {'recovered' if back == tt.params() else 'LOST'}")
    except ValueError as e:
        return (name, False, f"error: {e}")


def _check_surface_point() -> tuple[str, bool, str]:
    name = "surface(2, 3, -5/7)"
    try:
        p = sk.SklyaninParams(2, 3, "-5/7")
        f = p.field
        kappa = sk.sklyanin_kappa(p)
        kref = tuple(f.coerce(v) for v in (1, "-1/4", "7/4"))
        dims = graded_dims(sk.sklyanin_presentation(p), 4)
        omega = sk.sklyanin_potential(p)
        ladder = [delta_image(omega, k).dim for k in range(5)]
        good = (kappa == kref and dims == [1, 4, 10, 20, 35]
                and ladder == [1, 4, 6, 4, 1]
                and cx.selfduality_report(omega)["ok"])
        return (name, good, f"kappa {tuple(str(k) for k in kappa)}, dims "
                f"{dims}, ladder {ladder}")
    except ValueError as e:
        return (name, False, f"error: {e}")


def _check_staff_variant(variant: str) -> tuple[str, bool, str]:
    name = f"staff {variant}"
    try:
        p = sk.SklyaninParams(2, 3, "-5/7")
        pres, sigma, om = sk.staff_presentation(variant, p, 1, 1)
        dims = graded_dims(pres, 3)
        good = dims == [1, 4, 10, 20]
        if om is not None:
            good = good and is_superpotential(om, sigma)
            if variant == "drop_r1":
                f = p.field
                lam = sk.staff_lambda(variant, p, 1, 1)
                good = good and lam == tuple(
                    f.coerce(v) for v in (1, "-7/8", "1/8"))
            detail = f"dims {dims}, twisted superpotential"
        else:
            cand = sk.twisted_superpotential_space(pres, sigma, 4)
            good = good and cand.dim == 1
            detail = f"dims {dims}, candidate dim {cand.dim}"
        return (name, good, detail)
    except ValueError as e:
        return (name, False, f"error: {e}")


if __name__ == "__main__":
    main()
