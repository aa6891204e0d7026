# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled vote/selection kernels.

Behaviorally identical to ``platefuse._kernels_py`` (the reference
implementation); see that module for the semantics. Inputs are the same
parallel lists; strings are decoded once into a code-point matrix so the
voting loops run in C.
"""

from libc.stdlib cimport free, malloc
from libc.string cimport memset


cdef struct Slots:
    Py_ssize_t n
    Py_ssize_t *count
    Py_ssize_t *rep
    double *conf
    double *confp
    double *prio


cdef inline void _slots_reset(Slots *s):
    s.n = 0


cdef inline void _slot_new(Slots *s, Py_ssize_t rep, double conf, double pri):
    s.count[s.n] = 1
    s.rep[s.n] = rep
    s.conf[s.n] = conf
    s.confp[s.n] = pri
    s.prio[s.n] = pri
    s.n += 1


cdef inline void _slot_add(Slots *s, Py_ssize_t j, double conf, double pri):
    s.count[j] += 1
    if conf > s.conf[j] or (conf == s.conf[j] and pri < s.confp[j]):
        s.conf[j] = conf
        s.confp[j] = pri
    if pri < s.prio[j]:
        s.prio[j] = pri


cdef Py_ssize_t _slots_pick(Slots *s, bint use_conf, bint *tie_out):
    cdef Py_ssize_t top = 0, j, best = -1, ties = 0
    for j in range(1, s.n):
        if s.count[j] > s.count[top]:
            top = j
    for j in range(s.n):
        if s.count[j] != s.count[top]:
            continue
        ties += 1
        if best == -1:
            best = j
        elif use_conf:
            if s.conf[j] > s.conf[best] or (
                s.conf[j] == s.conf[best] and s.confp[j] < s.confp[best]
            ):
                best = j
        elif s.prio[j] < s.prio[best]:
            best = j
    tie_out[0] = ties > 1
    return best


def hc_select(list confs, list prio):
    """Index of the most confident entry; see the pure twin for details."""
    cdef Py_ssize_t n = len(confs)
    cdef Py_ssize_t i, best = 0, holders = 1
    cdef double c, bc = <double> confs[0]
    cdef double r, br = <double> prio[0]
    for i in range(1, n):
        c = <double> confs[i]
        r = <double> prio[i]
        if c > bc:
            best = i
            bc = c
            br = r
            holders = 1
        elif c == bc:
            holders += 1
            if r < br:
                best = i
                br = r
    return best, holders > 1


def mv_select(list texts, list confs, list prio, bint use_conf):
    """Whole-sequence plurality vote; returns (rep_index, votes, tied)."""
    cdef Py_ssize_t n = len(texts)
    cdef Py_ssize_t i, j, p, maxlen = 0, L
    cdef unicode t
    cdef bint tie = 0, same
    cdef Py_ssize_t *lens = <Py_ssize_t *> malloc(n * sizeof(Py_ssize_t))
    cdef double *conf = <double *> malloc(n * sizeof(double))
    cdef double *pri = <double *> malloc(n * sizeof(double))
    cdef Py_UCS4 *codes = NULL
    cdef Slots s
    memset(&s, 0, sizeof(Slots))
    if lens == NULL or conf == NULL or pri == NULL:
        free(lens); free(conf); free(pri)
        raise MemoryError()
    try:
        for i in range(n):
            t = <unicode> texts[i]
            lens[i] = len(t)
            if lens[i] > maxlen:
                maxlen = lens[i]
            conf[i] = <double> confs[i]
            pri[i] = <double> prio[i]
        codes = <Py_UCS4 *> malloc(n * maxlen * sizeof(Py_UCS4))
        if codes == NULL:
            raise MemoryError()
        for i in range(n):
            t = <unicode> texts[i]
            for p in range(lens[i]):
                codes[i * maxlen + p] = t[p]
        if not _slots_alloc(&s, n):
            raise MemoryError()
        for i in range(n):
            # find an existing slot with an identical text
            j = 0
            while j < s.n:
                L = lens[s.rep[j]]
                if L == lens[i]:
                    same = 1
                    for p in range(L):
                        if codes[s.rep[j] * maxlen + p] != codes[i * maxlen + p]:
                            same = 0
                            break
                    if same:
                        break
                j += 1
            if j < s.n:
                _slot_add(&s, j, conf[i], pri[i])
            else:
                _slot_new(&s, i, conf[i], pri[i])
        j = _slots_pick(&s, use_conf, &tie)
        return s.rep[j], s.count[j], tie != 0
    finally:
        _slots_free(&s)
        free(codes)
        free(lens)
        free(conf)
        free(pri)


def mvcp_select(list texts, list confs, list prio, bint use_conf):
    """Per-position plurality vote; returns (fused_text, tied)."""
    cdef Py_ssize_t n = len(texts)
    cdef Py_ssize_t i, j, p, maxlen = 0, length
    cdef unicode t
    cdef bint any_tie = 0, tie = 0
    cdef Py_UCS4 cv
    cdef Py_ssize_t *lens = <Py_ssize_t *> malloc(n * sizeof(Py_ssize_t))
    cdef double *conf = <double *> malloc(n * sizeof(double))
    cdef double *pri = <double *> malloc(n * sizeof(double))
    cdef Py_UCS4 *codes = NULL
    cdef Py_UCS4 *keys = NULL
    cdef Py_ssize_t *lkeys = NULL
    cdef Slots s
    memset(&s, 0, sizeof(Slots))
    if lens == NULL or conf == NULL or pri == NULL:
        free(lens); free(conf); free(pri)
        raise MemoryError()
    try:
        for i in range(n):
            t = <unicode> texts[i]
            lens[i] = len(t)
            if lens[i] > maxlen:
                maxlen = lens[i]
            conf[i] = <double> confs[i]
            pri[i] = <double> prio[i]
        codes = <Py_UCS4 *> malloc(n * maxlen * sizeof(Py_UCS4))
        keys = <Py_UCS4 *> malloc(n * sizeof(Py_UCS4))
        lkeys = <Py_ssize_t *> malloc(n * sizeof(Py_ssize_t))
        if codes == NULL or keys == NULL or lkeys == NULL:
            raise MemoryError()
        for i in range(n):
            t = <unicode> texts[i]
            for p in range(lens[i]):
                codes[i * maxlen + p] = t[p]
        if not _slots_alloc(&s, n):
            raise MemoryError()

        # length vote
        for i in range(n):
            j = 0
            while j < s.n:
                if lkeys[j] == lens[i]:
                    break
                j += 1
            if j < s.n:
                _slot_add(&s, j, conf[i], pri[i])
            else:
                lkeys[s.n] = lens[i]
                _slot_new(&s, i, conf[i], pri[i])
        j = _slots_pick(&s, use_conf, &tie)
        length = lkeys[j]
        any_tie = tie

        # per-position vote among predictions long enough to participate
        out = []
        for p in range(length):
            _slots_reset(&s)
            for i in range(n):
                if lens[i] <= p:
                    continue
                cv = codes[i * maxlen + p]
                j = 0
                while j < s.n:
                    if keys[j] == cv:
                        break
                    j += 1
                if j < s.n:
                    _slot_add(&s, j, conf[i], pri[i])
                else:
                    keys[s.n] = cv
                    _slot_new(&s, i, conf[i], pri[i])
            j = _slots_pick(&s, use_conf, &tie)
            any_tie = any_tie or tie
            cv = keys[j]
            out.append(cv)  # Py_UCS4 coerces to a 1-char str
        return "".join(out), any_tie != 0
    finally:
        _slots_free(&s)
        free(codes)
        free(keys)
        free(lkeys)
        free(lens)
        free(conf)
        free(pri)


cdef bint _slots_alloc(Slots *s, Py_ssize_t cap):
    s.n = 0
    s.count = <Py_ssize_t *> malloc(cap * sizeof(Py_ssize_t))
    s.rep = <Py_ssize_t *> malloc(cap * sizeof(Py_ssize_t))
    s.conf = <double *> malloc(cap * sizeof(double))
    s.confp = <double *> malloc(cap * sizeof(double))
    s.prio = <double *> malloc(cap * sizeof(double))
    return (
        s.count != NULL and s.rep != NULL and s.conf != NULL
        and s.confp != NULL and s.prio != NULL
    )


cdef void _slots_free(Slots *s):
    free(s.count)
    free(s.rep)
    free(s.conf)
    free(s.confp)
    free(s.prio)
