"""Time-vectorized SGP4 evaluation for near-earth element sets.

Faithful numpy transcription of the near-earth branch of the scalar
``sgp4`` routine in ``_sgp4_core``: one initialized satellite record,
an array of time offsets.  Constellation campaigns evaluate thousands
of satellites on a common epoch grid, where the scalar per-epoch loop
dominates runtime; this path reproduces the scalar results to
floating-point roundoff (covered by an equivalence test) while running
the time loop in numpy.

Deep-space records (method 'd') carry resonance state that updates
sequentially between calls and are intentionally not handled here;
callers fall back to the scalar routine for them.
"""

from __future__ import annotations

import numpy as np

_TWOPI = 2.0 * np.pi


@np.errstate(invalid="ignore", divide="ignore", over="ignore")
def sgp4_array(satrec, tsince_min: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate one near-earth record at many time offsets (minutes).

    Returns ``(r_km, v_kmps)`` of shape (n, 3).  Epochs where the
    scalar routine would flag an error (eccentricity out of range,
    negative semilatus rectum, decayed orbit) come back as NaN rows.
    Raises on a deep-space record.
    """
    if satrec.method == "d":
        raise ValueError("deep-space element set requires the scalar path")

    t = np.asarray(tsince_min, dtype=float)
    vkmpersec = satrec.radiusearthkm * satrec.xke / 60.0

    # Secular gravity and atmospheric drag.
    xmdf = satrec.mo + satrec.mdot * t
    argpdf = satrec.argpo + satrec.argpdot * t
    nodedf = satrec.nodeo + satrec.nodedot * t
    argpm = argpdf
    mm = xmdf
    t2 = t * t
    nodem = nodedf + satrec.nodecf * t2
    tempa = 1.0 - satrec.cc1 * t
    tempe = satrec.bstar * satrec.cc4 * t
    templ = satrec.t2cof * t2

    if satrec.isimp != 1:
        delomg = satrec.omgcof * t
        delmtemp = 1.0 + satrec.eta * np.cos(xmdf)
        delm = satrec.xmcof * (delmtemp * delmtemp * delmtemp - satrec.delmo)
        temp = delomg + delm
        mm = xmdf + temp
        argpm = argpdf - temp
        t3 = t2 * t
        t4 = t3 * t
        tempa = tempa - satrec.d2 * t2 - satrec.d3 * t3 - satrec.d4 * t4
        tempe = tempe + satrec.bstar * satrec.cc5 * (np.sin(mm) - satrec.sinmao)
        templ = templ + satrec.t3cof * t3 + t4 * (satrec.t4cof + t * satrec.t5cof)

    nm = satrec.no_unkozai
    em = satrec.ecco
    inclm = satrec.inclo

    bad = np.zeros(t.shape, dtype=bool)
    if nm <= 0.0:
        bad |= True
        nm = 1.0e-12

    am = (satrec.xke / nm) ** (2.0 / 3.0) * tempa * tempa
    nm = satrec.xke / am**1.5
    em = em - tempe

    bad |= (em >= 1.0) | (em < -0.001)
    em = np.maximum(em, 1.0e-6)
    mm = mm + satrec.no_unkozai * templ
    xlm = mm + argpm + nodem

    nodem = np.where(nodem >= 0.0, nodem % _TWOPI, -((-nodem) % _TWOPI))
    argpm = argpm % _TWOPI
    xlm = xlm % _TWOPI
    mm = (xlm - argpm - nodem) % _TWOPI

    sinim = np.sin(inclm)
    cosim = np.cos(inclm)

    # Near-earth records have no lunar-solar periodics.
    ep = em
    xincp = inclm
    argpp = argpm
    nodep = nodem
    mp = mm
    sinip = sinim
    cosip = cosim

    # Long period periodics.
    axnl = ep * np.cos(argpp)
    temp = 1.0 / (am * (1.0 - ep * ep))
    aynl = ep * np.sin(argpp) + temp * satrec.aycof
    xl = mp + argpp + nodep + temp * satrec.xlcof * axnl

    # Kepler's equation, mirroring the scalar clamped-Newton iteration:
    # each element keeps updating until its previous correction drops
    # below 1e-12, for at most 10 passes.
    u = (xl - nodep) % _TWOPI
    eo1 = u.copy()
    prev = np.full(t.shape, 9999.9)
    for _ in range(10):
        active = np.abs(prev) >= 1.0e-12
        if not active.any():
            break
        sineo1 = np.sin(eo1)
        coseo1 = np.cos(eo1)
        tem5 = 1.0 - coseo1 * axnl - sineo1 * aynl
        tem5 = (u - aynl * coseo1 + axnl * sineo1 - eo1) / tem5
        tem5 = np.clip(tem5, -0.95, 0.95)
        eo1 = np.where(active, eo1 + tem5, eo1)
        prev = np.where(active, tem5, prev)
    sineo1 = np.sin(eo1)
    coseo1 = np.cos(eo1)

    # Short period preliminary quantities.
    ecose = axnl * coseo1 + aynl * sineo1
    esine = axnl * sineo1 - aynl * coseo1
    el2 = axnl * axnl + aynl * aynl
    pl = am * (1.0 - el2)
    bad |= pl < 0.0
    pl = np.where(bad, 1.0, pl)

    rl = am * (1.0 - ecose)
    rdotl = np.sqrt(am) * esine / rl
    rvdotl = np.sqrt(pl) / rl
    betal = np.sqrt(np.maximum(1.0 - el2, 0.0))
    temp = esine / (1.0 + betal)
    sinu = am / rl * (sineo1 - aynl - axnl * temp)
    cosu = am / rl * (coseo1 - axnl + aynl * temp)
    su = np.arctan2(sinu, cosu)
    sin2u = (cosu + cosu) * sinu
    cos2u = 1.0 - 2.0 * sinu * sinu
    temp = 1.0 / pl
    temp1 = 0.5 * satrec.j2 * temp
    temp2 = temp1 * temp

    mrt = rl * (1.0 - 1.5 * temp2 * betal * satrec.con41) + (
        0.5 * temp1 * satrec.x1mth2 * cos2u
    )
    su = su - 0.25 * temp2 * satrec.x7thm1 * sin2u
    xnode = nodep + 1.5 * temp2 * cosip * sin2u
    xinc = xincp + 1.5 * temp2 * cosip * sinip * cos2u
    mvt = rdotl - nm * temp1 * satrec.x1mth2 * sin2u / satrec.xke
    rvdot = rvdotl + nm * temp1 * (
        satrec.x1mth2 * cos2u + 1.5 * satrec.con41
    ) / satrec.xke

    # Orientation vectors.
    sinsu = np.sin(su)
    cossu = np.cos(su)
    snod = np.sin(xnode)
    cnod = np.cos(xnode)
    sini = np.sin(xinc)
    cosi = np.cos(xinc)
    xmx = -snod * cosi
    xmy = cnod * cosi
    ux = xmx * sinsu + cnod * cossu
    uy = xmy * sinsu + snod * cossu
    uz = sini * sinsu
    vx = xmx * cossu - cnod * sinsu
    vy = xmy * cossu - snod * sinsu
    vz = sini * cossu

    bad |= mrt < 1.0  # decayed

    mr = mrt * satrec.radiusearthkm
    r = np.stack([mr * ux, mr * uy, mr * uz], axis=-1)
    v = np.stack(
        [
            (mvt * ux + rvdot * vx) * vkmpersec,
            (mvt * uy + rvdot * vy) * vkmpersec,
            (mvt * uz + rvdot * vz) * vkmpersec,
        ],
        axis=-1,
    )
    r[bad] = np.nan
    v[bad] = np.nan
    return r, v
