"""Pure-numpy implementations of the hot grid and marker kernels.

All stencil kernels operate on ghost-padded arrays (pad = 2 on every side);
boundary handling lives in the padding code, so the kernels are branch-free
stencils. Index convention: padded[2+i, 2+j, 2+k] == owned[i, j, k].

The compiled extension in ``_cykernels`` implements the same signatures.
"""

import numpy as np

NAME = "numpy"

PAD = 2


def _upwind2(adv, lo2, lo1, hi1, hi2):
    """Second-order upwind face value: linear extrapolation from upstream."""
    return np.where(adv >= 0.0, 1.5 * lo1 - 0.5 * lo2, 1.5 * hi1 - 0.5 * hi2)


def _advdiff_component(fp, adv_x_w, adv_x_e, adv_y_s, adv_y_n, adv_z_b, adv_z_t,
                       sl, hx, hy, hz, nu):
    """Flux-form advection + central diffusion for one velocity component.

    ``fp`` is the padded component array, ``sl`` the (i, j, k) slice triple of
    the owned interior points, and the ``adv_*`` arrays the advecting normal
    velocities on the west/east, south/north, bottom/top control-volume faces
    (same shape as the interior block).
    """
    i, j, k = sl
    c = fp[i, j, k]
    xm1 = fp[i.start - 1:i.stop - 1, j, k]
    xm2 = fp[i.start - 2:i.stop - 2, j, k]
    xp1 = fp[i.start + 1:i.stop + 1, j, k]
    xp2 = fp[i.start + 2:i.stop + 2, j, k]
    ym1 = fp[i, j.start - 1:j.stop - 1, k]
    ym2 = fp[i, j.start - 2:j.stop - 2, k]
    yp1 = fp[i, j.start + 1:j.stop + 1, k]
    yp2 = fp[i, j.start + 2:j.stop + 2, k]
    zm1 = fp[i, j, k.start - 1:k.stop - 1]
    zm2 = fp[i, j, k.start - 2:k.stop - 2]
    zp1 = fp[i, j, k.start + 1:k.stop + 1]
    zp2 = fp[i, j, k.start + 2:k.stop + 2]

    fw = adv_x_w * _upwind2(adv_x_w, xm2, xm1, c, xp1)
    fe = adv_x_e * _upwind2(adv_x_e, xm1, c, xp1, xp2)
    fs = adv_y_s * _upwind2(adv_y_s, ym2, ym1, c, yp1)
    fn = adv_y_n * _upwind2(adv_y_n, ym1, c, yp1, yp2)
    fb = adv_z_b * _upwind2(adv_z_b, zm2, zm1, c, zp1)
    ft = adv_z_t * _upwind2(adv_z_t, zm1, c, zp1, zp2)

    adv = (fe - fw) / hx + (fn - fs) / hy + (ft - fb) / hz
    diff = nu * ((xp1 - 2 * c + xm1) / hx**2
                 + (yp1 - 2 * c + ym1) / hy**2
                 + (zp1 - 2 * c + zm1) / hz**2)
    return diff - adv


def advdiff(up, vp, wp, nx, ny, nz, hx, hy, hz, nu, out_u, out_v, out_w):
    """RHS = -div(q u) + nu lap(u) for all three staggered components.

    Writes interior points only: u faces i = 1..nx-1, v faces j = 1..ny-1,
    w faces k = 1..nz-1 (domain-boundary faces are boundary-condition
    managed). Advecting velocities are face-averaged so the flux differences
    telescope: global momentum changes only through boundary fluxes.
    """
    P = PAD
    # --- u component: CV centred on x-face i, cells (j, k) ---
    i = slice(P + 1, P + nx)
    j = slice(P, P + ny)
    k = slice(P, P + nz)
    uw = 0.5 * (up[i.start - 1:i.stop - 1, j, k] + up[i, j, k])
    ue = 0.5 * (up[i, j, k] + up[i.start + 1:i.stop + 1, j, k])
    # v at the u-CV north face (i, j+1): average over the two straddling v's
    i_v = slice(i.start - 1, i.stop - 1)   # v cell index i-1 in padded coords
    vs = 0.5 * (vp[i_v, j, k] + vp[i, j, k])
    vn = 0.5 * (vp[i_v, j.start + 1:j.stop + 1, k] + vp[i, j.start + 1:j.stop + 1, k])
    wb = 0.5 * (wp[i_v, j, k] + wp[i, j, k])
    wt = 0.5 * (wp[i_v, j, k.start + 1:k.stop + 1] + wp[i, j, k.start + 1:k.stop + 1])
    out_u[1:nx, :, :] = _advdiff_component(up, uw, ue, vs, vn, wb, wt,
                                           (i, j, k), hx, hy, hz, nu)

    # --- v component: CV centred on y-face j, cells (i, k) ---
    i = slice(P, P + nx)
    j = slice(P + 1, P + ny)
    k = slice(P, P + nz)
    j_u = slice(j.start - 1, j.stop - 1)
    uw = 0.5 * (up[i, j_u, k] + up[i, j, k])
    ue = 0.5 * (up[i.start + 1:i.stop + 1, j_u, k] + up[i.start + 1:i.stop + 1, j, k])
    vs = 0.5 * (vp[i, j.start - 1:j.stop - 1, k] + vp[i, j, k])
    vn = 0.5 * (vp[i, j, k] + vp[i, j.start + 1:j.stop + 1, k])
    wb = 0.5 * (wp[i, j_u, k] + wp[i, j, k])
    wt = 0.5 * (wp[i, j_u, k.start + 1:k.stop + 1] + wp[i, j, k.start + 1:k.stop + 1])
    out_v[:, 1:ny, :] = _advdiff_component(vp, uw, ue, vs, vn, wb, wt,
                                           (i, j, k), hx, hy, hz, nu)

    # --- w component: CV centred on z-face k, cells (i, j) ---
    i = slice(P, P + nx)
    j = slice(P, P + ny)
    k = slice(P + 1, P + nz)
    k_u = slice(k.start - 1, k.stop - 1)
    uw = 0.5 * (up[i, j, k_u] + up[i, j, k])
    ue = 0.5 * (up[i.start + 1:i.stop + 1, j, k_u] + up[i.start + 1:i.stop + 1, j, k])
    vs = 0.5 * (vp[i, j, k_u] + vp[i, j, k])
    vn = 0.5 * (vp[i, j.start + 1:j.stop + 1, k_u] + vp[i, j.start + 1:j.stop + 1, k])
    wb = 0.5 * (wp[i, j, k.start - 1:k.stop - 1] + wp[i, j, k])
    wt = 0.5 * (wp[i, j, k] + wp[i, j, k.start + 1:k.stop + 1])
    out_w[:, :, 1:nz] = _advdiff_component(wp, uw, ue, vs, vn, wb, wt,
                                           (i, j, k), hx, hy, hz, nu)


def divergence(u, v, w, hx, hy, hz, out):
    """Cell-centred divergence of a staggered field."""
    out[...] = ((u[1:, :, :] - u[:-1, :, :]) / hx
                + (v[:, 1:, :] - v[:, :-1, :]) / hy
                + (w[:, :, 1:] - w[:, :, :-1]) / hz)


def _peskin4(r):
    """Peskin 4-point regularised delta, support |r| <= 2, sums to 1."""
    a = np.abs(r)
    inner = (3.0 - 2.0 * a + np.sqrt(np.maximum(1.0 + 4.0 * a - 4.0 * a * a, 0.0))) / 8.0
    outer = (5.0 - 2.0 * a - np.sqrt(np.maximum(-7.0 + 12.0 * a - 4.0 * a * a, 0.0))) / 8.0
    return np.where(a <= 1.0, inner, np.where(a <= 2.0, outer, 0.0))


def _kernel_stencil(g):
    """Base index (in padded coords) and 4 per-axis weights for positions g."""
    b = np.floor(g).astype(np.intp) - 1
    offs = np.arange(4)
    w = _peskin4(g[:, None] - (b[:, None] + offs[None, :]))
    return b + PAD, w


def ib_interp(fieldp, gx, gy, gz):
    """Interpolate a padded scalar grid to markers at grid-index coords g*."""
    bx, wx = _kernel_stencil(gx)
    by, wy = _kernel_stencil(gy)
    bz, wz = _kernel_stencil(gz)
    o = np.arange(4)
    ix = bx[:, None] + o              # (M, 4)
    iy = by[:, None] + o
    iz = bz[:, None] + o
    vals = fieldp[ix[:, :, None, None], iy[:, None, :, None], iz[:, None, None, :]]
    w = wx[:, :, None, None] * wy[:, None, :, None] * wz[:, None, None, :]
    return np.einsum("mijk,mijk->m", vals, w)


def ib_spread(gx, gy, gz, values, fieldp):
    """Adjoint of ib_interp: scatter marker values into a padded grid."""
    bx, wx = _kernel_stencil(gx)
    by, wy = _kernel_stencil(gy)
    bz, wz = _kernel_stencil(gz)
    o = np.arange(4)
    ix = bx[:, None, None, None] + o[None, :, None, None]
    iy = by[:, None, None, None] + o[None, None, :, None]
    iz = bz[:, None, None, None] + o[None, None, None, :]
    w = (values[:, None, None, None]
         * wx[:, :, None, None] * wy[:, None, :, None] * wz[:, None, None, :])
    np.add.at(fieldp, (np.broadcast_to(ix, w.shape),
                       np.broadcast_to(iy, w.shape),
                       np.broadcast_to(iz, w.shape)), w)
