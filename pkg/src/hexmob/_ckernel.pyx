# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled station kernel.

Mirrors ``hexmob._pykernel`` step for step, including the order in which
uniform variates are drawn, so both backends give identical results.
"""
from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.math cimport cos, sin, log, M_PI
from numpy.random cimport bitgen_t

from .errors import InvariantViolation
from .kernel import StationResult

cdef enum:
    IDLE = 0
    READY = 1
    STANDBY = 2

cdef enum:
    T_ATTACH = 0
    T_DISTANCE = 1
    T_LA = 2

cdef double TWO_PI = 2.0 * M_PI


cdef inline double next_double(bitgen_t *rng) noexcept nogil:
    return rng.next_double(rng.state)


cdef inline double norm_heading(double h) noexcept nogil:
    if h < 0.0:
        h += TWO_PI
    if h >= TWO_PI:
        h -= TWO_PI
    return h


cdef struct Station:
    int user_id
    double x, y, speed, heading
    int state
    int cur, anchor, la
    double ready_left, standby_left
    long ready_upd, standby_upd, cell_upd, attaches


cdef class _Ctx:
    cdef const double[:] bs_x
    cdef const double[:] bs_y
    cdef const int[:] la
    cdef const int[:] la_cells
    cdef const int[:, :] hop
    cdef int n_cells
    cdef double cov_sq, fast_sq
    cdef double xmin, xmax, ymin, ymax
    cdef bint is_distance
    cdef double ready_t, standby_t


cdef inline int nearest(_Ctx c, double x, double y, int cur) noexcept nogil:
    cdef double dx, dy, d2, best_d2
    cdef int i, best
    if cur >= 0:
        # strictly inside the current cell's inscribed circle: nothing else is closer
        dx = x - c.bs_x[cur]
        dy = y - c.bs_y[cur]
        d2 = dx * dx + dy * dy
        if d2 < c.fast_sq and d2 <= c.cov_sq:
            return cur
    best = -1
    best_d2 = 1e300
    for i in range(c.n_cells):
        dx = x - c.bs_x[i]
        dy = y - c.bs_y[i]
        d2 = dx * dx + dy * dy
        if d2 < best_d2:
            best_d2 = d2
            best = i
    if best < 0 or best_d2 > c.cov_sq:
        return -1
    return best


cdef inline void do_attach(_Ctx c, Station *s, int cell, double now, list records):
    s.state = READY
    s.cur = cell
    s.anchor = cell
    s.la = c.la[cell]
    s.ready_left = c.ready_t
    s.standby_left = 0.0
    s.attaches += 1
    records.append((now, s.user_id, cell, T_ATTACH, READY, s.speed, s.heading))


cdef inline void do_detach(Station *s) noexcept nogil:
    s.state = IDLE
    s.anchor = -1
    s.la = -1
    s.ready_left = 0.0
    s.standby_left = 0.0


cdef int cell_changed(_Ctx c, Station *s, int new, int d, double now, list records) except -1:
    cdef int trigger, prev = s.state
    s.cur = new
    if prev == IDLE:
        return 0
    if prev == READY:
        s.cell_upd += 1
    if c.is_distance:
        if c.hop[new, s.anchor] < d:
            return 0
        trigger = T_DISTANCE
    else:
        if c.la[new] == s.la:
            return 0
        trigger = T_LA
    s.anchor = new
    s.la = c.la[new]
    if prev == READY:
        s.ready_upd += 1
    else:
        s.standby_upd += 1
    records.append((now, s.user_id, new, trigger, prev, s.speed, s.heading))
    return 0


cdef int paging_cost(_Ctx c, Station *s, int d) noexcept nogil:
    cdef int j, n = 0
    if s.state == READY:
        return 1
    if c.is_distance:
        for j in range(c.n_cells):
            if c.hop[s.anchor, j] <= d:
                n += 1
        return n
    return c.la_cells[s.la]


cdef int check(_Ctx c, Station *s, int d, const unsigned char[:, :] member,
               list records, Py_ssize_t nrec_before, double now) except -1:
    cdef Py_ssize_t i
    for i in range(nrec_before, len(records)):
        if records[i][4] == IDLE:
            raise InvariantViolation(f"t={now}: update emitted in IDLE by station {s.user_id}")
    if (s.state == IDLE) != (s.anchor < 0 and s.la < 0):
        raise InvariantViolation(
            f"t={now}: station {s.user_id} in state {s.state} with anchor={s.anchor}")
    if s.cur != nearest(c, s.x, s.y, -1):
        raise InvariantViolation(f"t={now}: station {s.user_id} current cell is stale")
    if s.state == IDLE:
        return 0
    if c.is_distance and c.hop[s.cur, s.anchor] >= d:
        raise InvariantViolation(
            f"t={now}: station {s.user_id} is {c.hop[s.cur, s.anchor]} hops "
            f"from anchor {s.anchor} (D={d})")
    if s.state == STANDBY:
        if not member[s.anchor if c.is_distance else s.la, s.cur]:
            raise InvariantViolation(
                f"t={now}: station {s.user_id} in cell {s.cur} outside its paging set")
    return 0


def simulate_station(ctx, int user_id, kin, rng, int d, bint validate=False):
    cdef _Ctx c = _Ctx()
    c.bs_x = ctx.bs_x
    c.bs_y = ctx.bs_y
    c.la = ctx.la
    c.la_cells = ctx.la_cells
    c.hop = ctx.hop
    c.n_cells = ctx.grid.cell_count
    c.cov_sq = ctx.grid.coverage_sq
    c.fast_sq = 0.7 * ctx.grid.cell_radius * ctx.grid.cell_radius
    c.xmin = ctx.box.xmin
    c.xmax = ctx.box.xmax
    c.ymin = ctx.box.ymin
    c.ymax = ctx.box.ymax
    c.is_distance = ctx.is_distance
    c.ready_t = ctx.timers.ready
    c.standby_t = ctx.timers.standby

    cdef const unsigned char[:, :] member = None
    if validate:
        member = ctx.standby_paging_table(d)

    capsule = rng.bit_generator.capsule
    cdef bitgen_t *bg = <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")

    cdef double dt = ctx.dt
    cdef double p_turn = ctx.p_turn
    cdef double p_session = ctx.p_session
    cdef double mean_tx = ctx.mean_tx
    cdef long n_ticks = ctx.n_ticks
    cdef list records = []
    cdef long paging_events = 0, total_cost = 0
    cdef Station s
    cdef long k
    cdef int new
    cdef double now, dist, x, y, h
    cdef bint in_session = False
    cdef double session_left = 0.0
    cdef Py_ssize_t nrec

    s.user_id = user_id
    s.x = kin.x
    s.y = kin.y
    s.speed = kin.speed
    s.heading = kin.heading
    s.ready_upd = s.standby_upd = s.cell_upd = s.attaches = 0
    s.ready_left = 0.0
    s.standby_left = 0.0
    s.cur = nearest(c, s.x, s.y, -1)
    if s.cur >= 0:
        s.state = READY
        s.anchor = s.cur
        s.la = c.la[s.cur]
        s.ready_left = c.ready_t
    else:
        s.state = IDLE
        s.anchor = -1
        s.la = -1

    dist = s.speed * dt
    for k in range(n_ticks):
        now = (k + 1) * dt
        nrec = len(records)

        # kinematics
        h = s.heading
        if next_double(bg) < p_turn:
            h = TWO_PI * next_double(bg)
        x = s.x + dist * cos(h)
        y = s.y + dist * sin(h)
        while x > c.xmax or x < c.xmin:
            if x > c.xmax:
                x = 2.0 * c.xmax - x
            else:
                x = 2.0 * c.xmin - x
            h = norm_heading(M_PI - h)
        while y > c.ymax or y < c.ymin:
            if y > c.ymax:
                y = 2.0 * c.ymax - y
            else:
                y = 2.0 * c.ymin - y
            h = norm_heading(-h)
        s.x = x
        s.y = y
        s.heading = h

        # coverage and cell changes
        new = nearest(c, x, y, s.cur)
        if s.cur >= 0 and new < 0:
            in_session = False
            do_detach(&s)
            s.cur = -1
        elif s.cur < 0 and new >= 0:
            if s.state == IDLE:
                do_attach(c, &s, new, now, records)
            else:
                s.cur = new
        elif s.cur != new:
            cell_changed(c, &s, new, d, now, records)

        # timers
        if s.state == READY and not in_session:
            s.ready_left -= dt
            if s.ready_left <= 0.0:
                s.state = STANDBY
                s.ready_left = 0.0
                s.standby_left = c.standby_t
        elif s.state == STANDBY:
            s.standby_left -= dt
            if s.standby_left <= 0.0:
                do_detach(&s)

        # traffic
        if in_session:
            session_left -= dt
            if session_left <= 0.0:
                in_session = False
                if s.state == READY:
                    s.ready_left = c.ready_t
        elif next_double(bg) < p_session and s.cur >= 0:
            session_left = -mean_tx * log(1.0 - next_double(bg))
            if s.state != IDLE:
                paging_events += 1
                total_cost += paging_cost(c, &s, d)
            in_session = True
            if s.state == STANDBY:
                s.state = READY
                s.ready_left = c.ready_t
                s.standby_left = 0.0
            elif s.state == IDLE:
                do_attach(c, &s, s.cur, now, records)

        if validate:
            check(c, &s, d, member, records, nrec, now)

    return StationResult(
        records=records,
        hlr_updates_ready=s.ready_upd,
        hlr_updates_standby=s.standby_upd,
        cell_updates=s.cell_upd,
        attaches=s.attaches,
        paging_events=paging_events,
        paging_cost=total_cost,
    )
