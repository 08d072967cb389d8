"""Killing local cohomology classes in module-finite extensions, with
certificates that are re-checked from their serialized form."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import budget
from .cech import (
    SIGN_CONVENTION,
    CechComplex,
    Cochain,
    cochains_equal,
    cone_homotopy,
    differential,
    first_difference,
    is_cocycle,
    lc_graded_piece,
    unit_homotopy,
)
from .errors import BudgetExceeded, FrobKillError, InjectivityError, PreconditionError
from .frobenius import ClassHandle, FrobeniusPoly, find_relation
from .groebner import Ideal, lift
from .ringfile import digest, ring_hash, seal, tower_from_json, tower_to_json
from .tower import (
    Fraction,
    RingTower,
    adjoin_root,
    check_monic,
    compositum,
    fresh_name,
    seq_exponent,
)

CONVENTION = {
    "monomial_order": "grevlex on the base; towers: block order, adjoined vars > base vars",
    "cech_sign": SIGN_CONVENTION,
    "homotopy": "cone off the first sequence index: eta_J = c_(0 J)",
    "polynomials": "terms in descending grevlex order, explicit coefficients mod p",
}
ROOT_CHOICE = (
    "roots are presentation-level adjunctions; no minimal prime (choice of root in an "
    "algebraic closure) is selected"
)


class MembershipNotFound(BudgetExceeded):
    def __init__(self, msg, tower=None):
        super().__init__(msg)
        self.tower = tower


@dataclass
class KillCertificate:
    data: dict
    tower: RingTower = None

    def to_json(self):
        return self.data


@dataclass
class TrivializationCertificate:
    params: list
    witness: object
    tower: RingTower
    cofactors: list
    data: dict = field(default_factory=dict)

    def to_json(self):
        return self.data


def _names_taken(ring):
    return set(ring.names)


def kill_class(alpha, cx, tag="1", orbit_cap=4, exp_cap=None, koszul_level=None):
    """Construct a tower in which alpha maps to zero; returns (tower, certificate)."""
    base = cx.base
    i = alpha.level
    dim = base.dim()
    if i >= dim:
        raise PreconditionError(f"cohomological degree {i} is not below dim R = {dim}")
    if not is_cocycle(alpha.cocycle):
        raise PreconditionError("class representative is not a cocycle")
    seq = cx.seq
    rel = find_relation(alpha, orbit_cap=orbit_cap, exp_cap=exp_cap)
    g = rel.g
    data = {
        "kind": "kill-certificate",
        "ring_hash": ring_hash(base),
        "convention": dict(CONVENTION, budgets={"orbit_cap": orbit_cap, "exp_cap": exp_cap}),
        "cech": [base.ring.names[j] for j in seq],
        "level": i,
        "degree": alpha.degree,
        "koszul_level": koszul_level,
        "class": alpha.cocycle.to_json(),
        "g": g.to_json(),
        "beta": rel.beta.to_json(),
        "beta_level": rel.koszul_level,
        "root_choice": ROOT_CHOICE,
        "z_adjunctions": [],
        "corrected": {"level": i, "components": []},
        "rho_adjunctions": [],
        "extra_relations": [],
        "eta": {"level": i - 1, "components": []},
    }
    if rel.degenerate:
        T = base.trivial_tower()
        data["rank_bound"] = 1
        return T, KillCertificate(seal(data), T)

    taken = _names_taken(base.ring)
    T = base.trivial_tower()
    z_vars = {}
    for n, (J, fr) in enumerate(rel.beta.comps.items(), 1):
        name = fresh_name(taken, f"Z{tag}_{n}")
        taken.add(name)
        ring = T.ring.extend([name])
        Z = ring.gen(name)
        h = g.cleared_relation(Z, fr.num.to_ring(ring), fr.den, seq)
        T = adjoin_root(T, h, name, verify=False)
        z_vars[J] = (name, fr.den)
        data["z_adjunctions"].append(
            {"var": name, "subset": list(J), "den": list(fr.den), "relation": h.to_string()}
        )
    T1 = T
    cx1 = CechComplex(T1)
    a1 = alpha.cocycle.to_complex(cx1)
    tt = Cochain(
        cx1, i - 1, {J: Fraction(T1.ring.gen(nm), den, seq) for J, (nm, den) in z_vars.items()}
    )
    corrected = a1 - differential(tt)
    data["corrected"] = corrected.to_json()

    const = {}
    for n, (J, fr) in enumerate(corrected.comps.items(), 1):
        if not any(fr.den):
            const[J] = fr.num
            continue
        name = fresh_name(taken, f"R{tag}_{n}")
        taken.add(name)
        ring = T.ring.extend([name])
        rho = ring.gen(name)
        h = g(rho)
        ident = rho.mul_monomial(seq_exponent(ring.nvars, seq, fr.den)) - fr.num.to_ring(ring)
        T = adjoin_root(T, h, name, side=[ident], verify=False)
        const[J] = name
        data["rho_adjunctions"].append(
            {"var": name, "subset": list(J), "relation": h.to_string(), "identity": ident.to_string()}
        )
    T2 = T
    cx2 = CechComplex(T2)
    zero = (0,) * len(seq)
    abar = Cochain(
        cx2,
        i,
        {
            J: Fraction(T2.ring.gen(v) if isinstance(v, str) else v.to_ring(T2.ring), zero, seq)
            for J, v in const.items()
        },
    )
    eta = cone_homotopy(abar)
    residual = abar - differential(eta)
    extras = []
    for J, fr in residual.comps.items():
        if T2.zero_test(fr.num):
            continue
        # only torsion may be discarded: it vanishes in the localization at (0) ∪ J
        if not T2.loc_zero_test(fr, tuple(sorted(set((0,) + J)))):
            raise PreconditionError(f"corrected cocycle fails the cocycle condition at {J}")
        extras.append(T2.ideal.reduce(fr.num))
    T3 = T2.with_extras(extras, verify=False) if extras else T2
    ok, _ = T3.injectivity_check()
    if not ok:
        raise InjectivityError("base ring does not inject into the constructed tower")
    cx3 = CechComplex(T3)
    eta = unit_homotopy(abar.to_complex(cx3))
    data["extra_relations"] = [e.to_string() for e in extras]
    data["eta"] = eta.to_json()
    data["rank_bound"] = T3.rank_bound()
    killed = differential(eta + tt.to_complex(cx3))
    if not cochains_equal(killed, alpha.cocycle.to_complex(cx3)):
        raise AssertionError("constructed tower does not kill the class")
    return T3, KillCertificate(seal(data), T3)


# -- verification --------------------------------------------------------------


class _Fail(Exception):
    def __init__(self, check, message):
        super().__init__(f"{check}: {message}")
        self.check = check
        self.message = message


@dataclass
class VerifyReport:
    ok: bool
    checks: list
    failed: str = None
    message: str = None

    def __str__(self):
        lines = [f"  ok   {c}" for c in self.checks]
        if not self.ok:
            lines.append(f"  FAIL {self.failed}: {self.message}")
        lines.append("OK" if self.ok else "FAIL")
        return "\n".join(lines)


def _require(cond, check, message):
    if not cond:
        raise _Fail(check, message)


def _cert_rings(cert, base):
    zs = [z["var"] for z in cert["z_adjunctions"]]
    rs = [r["var"] for r in cert["rho_adjunctions"]]
    names = zs + rs
    _require(len(set(names)) == len(names), "format", "adjoined variables repeat")
    _require(not set(names) & set(base.ring.names), "format", "adjoined variable shadows base")
    return base.ring.extend(zs), base.ring.extend(names)


def cert_tower(cert, base):
    """Rebuild the certificate's final tower from its serialized fields."""
    _, full = _cert_rings(cert, base)
    levels = [(z["var"], full.parse(z["relation"])) for z in cert["z_adjunctions"]]
    levels += [(r["var"], full.parse(r["relation"])) for r in cert["rho_adjunctions"]]
    extras = [full.parse(r["identity"]) for r in cert["rho_adjunctions"]]
    extras += [full.parse(e) for e in cert["extra_relations"]]
    return RingTower(base, tuple(levels), tuple(extras))


def _verify_cert(cert, base, done):
    def ok(name):
        done.append(name)

    _require(cert.get("kind") == "kill-certificate", "format", "not a kill certificate")
    _require(cert.get("digest") == digest(cert), "digest", "transcript digest mismatch")
    ok("digest")
    _require(cert["ring_hash"] == ring_hash(base), "ring-hash", "certificate is for another ring")
    ok("ring-hash")
    expect = dict(CONVENTION, budgets=cert["convention"].get("budgets"))
    _require(cert["convention"] == expect, "convention", "unknown convention block")
    _require(cert["root_choice"] == ROOT_CHOICE, "convention", "unknown root-choice record")
    _require(
        cert["cech"] == [base.ring.names[j] for j in base.cech], "cech", "Čech sequence differs"
    )
    ok("convention")
    seq = base.cech
    p = base.p
    cx0 = CechComplex(base)
    alpha = Cochain.from_json(cx0, cert["class"])
    i = int(cert["level"])
    _require(alpha.level == i, "class", "class level differs from the recorded level")
    _require(i < base.dim(), "class", "level is not below the dimension")
    deg = alpha.degree()
    _require(deg is None or deg == cert["degree"], "class", "recorded degree is wrong")
    _require(is_cocycle(alpha), "class-cocycle", "class representative is not a cocycle")
    ok("class-cocycle")
    g = FrobeniusPoly.from_json(base.ring, cert["g"])
    _require(all(c.is_homogeneous() for c in g.coeffs if c), "g", "inhomogeneous coefficient")
    beta = Cochain.from_json(cx0, cert["beta"])
    _require(beta.level == i - 1, "g(alpha)=d(beta)", "beta has the wrong level")
    bad = first_difference(differential(beta), g.apply_cochain(alpha))
    _require(bad is None, "g(alpha)=d(beta)", f"identity fails at component {bad}")
    ok("g(alpha)=d(beta)")
    R1, full = _cert_rings(cert, base)

    if alpha.is_formally_zero():
        for key in ("z_adjunctions", "rho_adjunctions", "extra_relations"):
            _require(not cert[key], "degenerate", f"zero class with nonempty {key}")
        _require(not cert["eta"]["components"], "degenerate", "zero class with nonzero eta")
        _require(cert["rank_bound"] == 1, "rank-bound", "wrong rank bound")
        ok("degenerate")
        return

    zlist = cert["z_adjunctions"]
    _require(
        [tuple(z["subset"]) for z in zlist] == list(beta.comps),
        "z-adjunctions",
        "Z adjunctions do not match the components of beta",
    )
    zcomps = {}
    for k, z in enumerate(zlist):
        J = tuple(z["subset"])
        fr = beta.comps[J]
        _require(tuple(z["den"]) == fr.den, "z-adjunctions", f"denominator of {z['var']} differs")
        Z = R1.gen(z["var"])
        h = R1.parse(z["relation"])
        try:
            check_monic(h, R1.index(z["var"]), base.ring.nvars + k)
        except PreconditionError as exc:
            raise _Fail("z-monic", str(exc)) from None
        expect = g.cleared_relation(Z, fr.num.to_ring(R1), fr.den, seq)
        _require(h == expect, "z-clearing", f"relation for {z['var']} is not the cleared equation")
        zcomps[J] = Fraction(Z, fr.den, seq)
    ok("z-monic")
    ok("z-clearing")
    T1 = RingTower(base, tuple((z["var"], R1.parse(z["relation"])) for z in zlist))
    cx1 = CechComplex(T1)
    tt = Cochain(cx1, i - 1, zcomps)
    corrected = Cochain.from_json(cx1, cert["corrected"])
    bad = first_difference(corrected, alpha.to_complex(cx1) - differential(tt))
    _require(bad is None, "corrected-cocycle", f"mismatch at component {bad}")
    ok("corrected-cocycle")
    gbar = g.apply_cochain(corrected)
    bad = first_difference(gbar, cx1.zero(i))
    _require(bad is None, "g(rho)=0", f"g does not kill component {bad}")
    ok("g(rho)=0")

    rlist = cert["rho_adjunctions"]
    nonconst = [J for J, fr in corrected.comps.items() if any(fr.den)]
    _require(
        [tuple(r["subset"]) for r in rlist] == nonconst,
        "rho-adjunctions",
        "rho adjunctions do not match the non-constant corrected components",
    )
    const = {}
    for J, fr in corrected.comps.items():
        if not any(fr.den):
            const[J] = fr.num.to_ring(full)
    for k, r in enumerate(rlist):
        J = tuple(r["subset"])
        fr = corrected.comps[J]
        rho = full.gen(r["var"])
        h = full.parse(r["relation"])
        try:
            check_monic(h, full.index(r["var"]), base.ring.nvars + len(zlist) + k)
        except PreconditionError as exc:
            raise _Fail("rho-monic", str(exc)) from None
        _require(h == g(rho), "rho-relation", f"relation for {r['var']} is not g(rho)")
        ident = full.parse(r["identity"])
        expect = rho.mul_monomial(seq_exponent(full.nvars, seq, fr.den)) - fr.num.to_ring(full)
        _require(ident == expect, "rho-identity", f"fraction identity for {r['var']} differs")
        const[J] = rho
    ok("rho-relation")
    ok("rho-identity")

    T3 = cert_tower(cert, base)
    injective, _ = T3.injectivity_check()
    _require(injective, "injectivity", "base ring does not inject into the tower")
    ok("injectivity")
    nz = len(zlist) + len(rlist)
    rb = T3.rank_bound()
    _require(cert["rank_bound"] == rb, "rank-bound", "recorded rank bound is wrong")
    _require(rb <= p ** (g.s * nz), "rank-bound", "rank bound exceeds p^(s * adjunctions)")
    ok("rank-bound")
    cx3 = CechComplex(T3)
    eta = Cochain.from_json(cx3, cert["eta"])
    _require(eta.level == i - 1, "eta", "eta has the wrong level")
    _require(eta.is_constant(), "eta", "eta must be denominator-free")
    zero = (0,) * len(seq)
    abar = Cochain(cx3, i, {J: Fraction(v, zero, seq) for J, v in const.items()})
    bad = first_difference(differential(eta), abar)
    _require(bad is None, "d(eta)=corrected", f"mismatch at component {bad}")
    bad = first_difference(differential(eta), corrected.to_complex(cx3))
    _require(bad is None, "d(eta)=corrected", f"mismatch at component {bad}")
    ok("d(eta)=corrected")
    killed = differential(eta + tt.to_complex(cx3))
    bad = first_difference(killed, alpha.to_complex(cx3))
    _require(bad is None, "class-dies", f"image of the class survives at component {bad}")
    ok("class-dies")


def verify_certificate(cert, base):
    """Re-verify every identity of a kill certificate (or bundle) from its
    serialized form; the report names the first broken check."""
    if isinstance(cert, KillCertificate):
        cert = cert.data
    done = []
    try:
        if not isinstance(cert, dict):
            raise _Fail("format", "certificate must be a JSON object")
        if cert.get("kind") == "kill-bundle":
            _verify_bundle(cert, base, done)
        elif cert.get("kind") == "trivialization":
            _verify_trivialization(cert, base, done)
        else:
            _verify_cert(cert, base, done)
    except _Fail as exc:
        return VerifyReport(False, done, exc.check, exc.message)
    except FrobKillError as exc:
        return VerifyReport(False, done, "format", f"{exc.category}: {exc}")
    except (KeyError, TypeError, ValueError, IndexError, AttributeError) as exc:
        return VerifyReport(False, done, "format", f"malformed certificate ({type(exc).__name__}: {exc})")
    return VerifyReport(True, done)


# -- killing all of a finite-length H^i ----------------------------------------


def scan_pieces(cx, i, window, guard, koszul_cap=12):
    """Nonzero pieces in the window; guard bands around them must vanish."""
    lo, hi = window
    pieces = {}

    def piece(t):
        if t not in pieces:
            pieces[t] = lc_graded_piece(cx, i, t, koszul_cap)
        return pieces[t]

    nonzero = [t for t in range(lo, hi + 1) if piece(t).dimension]
    tmin = min(nonzero) if nonzero else lo
    tmax = max(nonzero) if nonzero else hi
    for t in list(range(tmin - guard, tmin)) + list(range(tmax + 1, tmax + guard + 1)):
        if piece(t).dimension:
            raise PreconditionError(
                f"finite length of H^{i}_m(R) not evidenced: nonzero piece in degree {t} "
                f"inside the guard band around [{tmin}, {tmax}] (inputs must have "
                f"finite-length H^{i}, e.g. generalized Cohen-Macaulay)"
            )
    return [pieces[t] for t in nonzero]


def kill_all(pres, i, cx=None, window=(-3, 3), guard=3, koszul_cap=12, orbit_cap=4,
             exp_cap=None):
    """Kill every basis class of every nonzero piece of H^i_m(R); returns
    (compositum tower, certificates)."""
    pres.require_graded()
    cx = cx or CechComplex(pres)
    dim = pres.dim()
    if i >= dim:
        raise PreconditionError(f"cohomological degree {i} is not below dim R = {dim}")
    if not pres.cech_is_primary():
        raise PreconditionError("the Čech sequence does not generate an m-primary ideal")
    pieces = scan_pieces(cx, i, window, guard, koszul_cap)
    T = pres.trivial_tower()
    certs = []
    n = 0
    for pc in pieces:
        for k, c in enumerate(pc.basis):
            budget.check()
            n += 1
            alpha = ClassHandle(c, pc.t, (i, pc.t, k))
            Tk, cert = kill_class(alpha, cx, str(n), orbit_cap, exp_cap, pc.koszul_level)
            T = compositum(T, Tk, verify=False)
            certs.append(cert)
    if certs:
        ok, _ = T.injectivity_check()
        if not ok:
            raise InjectivityError("compositum tower is not an extension of the base")
        for cert in certs:
            _class_dies_in(cert.data, pres, T)
    return T, certs


def _class_dies_in(cert, base, T):
    """The certificate's final identity, re-checked in a larger tower T."""
    own = cert_tower(cert, base)
    for nm, rel in own.levels:
        _require(nm in T.ring.names, "compositum", f"variable {nm} missing from the compositum")
        _require(T.zero_test(rel.to_ring(T.ring)), "compositum", f"relation of {nm} missing")
    for e in own.extras:
        _require(T.zero_test(e.to_ring(T.ring)), "compositum", "side relation missing")
    cx = CechComplex(T)
    alpha = Cochain.from_json(cx, cert["class"])
    if alpha.is_formally_zero():
        return
    eta = Cochain.from_json(cx, cert["eta"])
    zcomps = {
        tuple(z["subset"]): Fraction(T.ring.gen(z["var"]), tuple(z["den"]), T.seq)
        for z in cert["z_adjunctions"]
    }
    tt = Cochain(cx, alpha.level - 1, zcomps)
    bad = first_difference(differential(eta + tt), alpha)
    _require(bad is None, "compositum", f"class survives in the compositum at {bad}")


def bundle(pres, i, T, certs, window, guard):
    data = {
        "kind": "kill-bundle",
        "ring_hash": ring_hash(pres),
        "level": i,
        "window": list(window),
        "guard": guard,
        "tower": tower_to_json(T),
        "certificates": [c.data for c in certs],
    }
    return seal(data)


def _verify_bundle(data, base, done):
    _require(data.get("digest") == digest(data), "digest", "bundle digest mismatch")
    _require(data["ring_hash"] == ring_hash(base), "ring-hash", "bundle is for another ring")
    ok_names = []
    for k, cert in enumerate(data["certificates"]):
        sub = []
        try:
            _verify_cert(cert, base, sub)
        except _Fail as exc:
            raise _Fail(f"certificate[{k}].{exc.check}", exc.message) from None
        _require(cert["level"] == data["level"], "bundle", "certificate level differs")
        ok_names.extend(f"certificate[{k}].{n}" for n in sub)
    T = base.trivial_tower()
    for cert in data["certificates"]:
        T = compositum(T, cert_tower(cert, base), verify=False)
    _require(tower_to_json(T) == data["tower"], "bundle-tower", "recorded tower is not the compositum")
    if data["certificates"]:
        injective, _ = T.injectivity_check()
        _require(injective, "bundle-injectivity", "base ring does not inject into the compositum")
        for cert in data["certificates"]:
            _class_dies_in(cert, base, T)
    done.extend(ok_names + ["bundle-tower", "compositum"])


# -- trivializing colon relations -----------------------------------------------


def trivialize_relation(pres, params, witness, window=(-3, 3), guard=3, koszul_cap=12,
                        orbit_cap=4, exp_cap=None):
    """Tower T and cofactors with witness = Σ c_k x_k in T, for a colon
    relation x_j * w ∈ (x_1..x_{j-1}) that fails in R."""
    ring = pres.ring
    params = [x.to_ring(ring) for x in params]
    w = witness.to_ring(ring)
    j = len(params)
    if j < 1:
        raise PreconditionError("need at least one parameter")
    for x in params:
        if not x or not x.is_homogeneous() or x.total_degree() < 1:
            raise PreconditionError(f"parameter {x} is not homogeneous of positive degree")
    dim = pres.dim()
    if j > dim or Ideal(ring, list(pres.gens) + params).krull_dim() != dim - j:
        raise PreconditionError("parameters are not part of a homogeneous system of parameters")
    prefix = Ideal(ring, list(pres.gens) + params[:-1])
    if not prefix.contains(params[-1] * w):
        raise PreconditionError("x_j * w is not in (x_1..x_{j-1}); no colon relation")
    if prefix.contains(w):
        raise PreconditionError("witness already lies in (x_1..x_{j-1}) in R")
    T = pres.trivial_tower()
    for i in range(1, j):
        Ti, _ = kill_all(pres, i, window=window, guard=guard, koszul_cap=koszul_cap,
                         orbit_cap=orbit_cap, exp_cap=exp_cap)
        T = compositum(T, Ti, verify=False)
    gens = [T.embed(x) for x in params[:-1]]
    cof = lift(T.embed(w), gens, T.ideal.basis, T.order)
    if cof is None:
        raise MembershipNotFound("witness not found in (x_1..x_{j-1}) of the constructed tower", T)
    cof = [T.ideal.reduce(c) for c in cof]
    residue = T.embed(w) - sum((c * x for c, x in zip(cof, gens)), T.ring.zero())
    if not T.zero_test(residue):
        raise AssertionError("lifted cofactors do not reproduce the witness")
    data = seal(
        {
            "kind": "trivialization",
            "ring_hash": ring_hash(pres),
            "params": [x.to_string() for x in params],
            "witness": w.to_string(),
            "tower": tower_to_json(T),
            "cofactors": [c.to_string() for c in cof],
        }
    )
    return TrivializationCertificate(params, w, T, cof, data)


def _verify_trivialization(data, base, done):
    _require(data.get("digest") == digest(data), "digest", "digest mismatch")
    _require(data["ring_hash"] == ring_hash(base), "ring-hash", "certificate is for another ring")
    ring = base.ring
    params = [ring.parse(x) for x in data["params"]]
    w = ring.parse(data["witness"])
    prefix = Ideal(ring, list(base.gens) + params[:-1])
    _require(prefix.contains(params[-1] * w), "colon", "x_j * w not in (x_1..x_{j-1})")
    _require(not prefix.contains(w), "nonmember", "witness already in (x_1..x_{j-1}) in R")
    done.append("colon-relation")
    T = tower_from_json(base, data["tower"])
    injective, _ = T.injectivity_check()
    _require(injective, "injectivity", "base ring does not inject into the tower")
    _require(data["tower"]["rank_bound"] == T.rank_bound(), "rank-bound", "wrong rank bound")
    done.append("injectivity")
    cof = [T.ring.parse(c) for c in data["cofactors"]]
    _require(len(cof) == len(params) - 1, "cofactors", "wrong number of cofactors")
    residue = T.embed(w) - sum((c * T.embed(x) for c, x in zip(cof, params)), T.ring.zero())
    _require(T.zero_test(residue), "cofactors", "w - Σ c_k x_k is not zero in the tower")
    done.append("cofactors")
