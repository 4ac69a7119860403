# cython: language_level=3
# cython: binding=True
"""Pure-Python counting kernel for F-first leftmost reduction.

Terms are plain tuples tagged by an integer in slot 0:

    (0, name)            variable
    (1, binder, body)    abstraction
    (2, fun, arg)        application
    (3, symbol)          constant
    (4, datatype, payload)  value code (non-Boolean datatypes)

Boolean codes are the lambda booleans, so guard results can select
branches.  This module records only counts, not traces; the traced
engine in ``reduction``/``lambda_f`` is the reference implementation and
the test suite checks step-for-step agreement.

A signature is a dict ``name -> (arity, arg_datatypes, result_datatype,
fn)`` where ``fn`` maps payloads to a payload or None (undefined).

Kept import-light and Cython-compilable: the ``_speedups`` extension is
built from this exact source.
"""

VAR = 0
ABS = 1
APP = 2
CONST = 3
CODE = 4

STATUS_NORMAL = 0
STATUS_RAN = 1
STATUS_UNDEFINED = 2

_TRUE = (ABS, "x", (ABS, "y", (VAR, "x")))
_FALSE = (ABS, "x", (ABS, "y", (VAR, "y")))

_counter = [0]


def _fresh(base):
    _counter[0] += 1
    return base.split("$")[0] + "$k" + str(_counter[0])


def _code(datatype, payload):
    if datatype == "Bool":
        return _TRUE if payload else _FALSE
    return (CODE, datatype, payload)


def _match_code(t, datatype):
    """Return (payload,) when t codes an element of datatype, else None."""
    if datatype == "Bool":
        if t[0] == ABS and t[2][0] == ABS and t[2][2][0] == VAR:
            name = t[2][2][1]
            if name == t[2][1]:
                return (False,)
            if name == t[1]:
                return (True,)
        return None
    if t[0] == CODE and t[1] == datatype:
        return (t[2],)
    return None


def _free_in(t, name):
    stack = [t]
    while stack:
        s = stack.pop()
        tag = s[0]
        if tag == VAR:
            if s[1] == name:
                return True
        elif tag == ABS:
            if s[1] != name:
                stack.append(s[2])
        elif tag == APP:
            stack.append(s[1])
            stack.append(s[2])
    return False


def _subst(t, name, repl, repl_free):
    tag = t[0]
    if tag == VAR:
        return repl if t[1] == name else t
    if tag == APP:
        return (APP, _subst(t[1], name, repl, repl_free), _subst(t[2], name, repl, repl_free))
    if tag == ABS:
        binder = t[1]
        if binder == name or not _free_in(t[2], name):
            return t
        if binder in repl_free:
            fresh = _fresh(binder)
            fv = frozenset((fresh,))
            renamed = _subst(t[2], binder, (VAR, fresh), fv)
            return (ABS, fresh, _subst(renamed, name, repl, repl_free))
        return (ABS, binder, _subst(t[2], name, repl, repl_free))
    return t


def _free_vars(t, acc, bound):
    tag = t[0]
    if tag == VAR:
        if t[1] not in bound:
            acc.add(t[1])
    elif tag == ABS:
        _free_vars(t[2], acc, bound | {t[1]})
    elif tag == APP:
        _free_vars(t[1], acc, bound)
        _free_vars(t[2], acc, bound)


def substitute(t, name, repl):
    acc = set()
    _free_vars(repl, acc, frozenset())
    return _subst(t, name, repl, frozenset(acc))


class _Undefined(Exception):
    pass


def _try_f(t, sig):
    """Contract the leftmost F-redex; None if there is none.

    Raises _Undefined when the leftmost F-redex applies a partial
    function outside its domain.
    """
    tag = t[0]
    if tag == APP:
        # unwind the application spine
        head = t
        args = []
        while head[0] == APP:
            args.append(head[2])
            head = head[1]
        args.reverse()
        if head[0] == CONST:
            entry = sig.get(head[1])
            if entry is not None and entry[0] == len(args):
                payloads = []
                ok = True
                for a, dt in zip(args, entry[1]):
                    hit = _match_code(a, dt)
                    if hit is None:
                        ok = False
                        break
                    payloads.append(hit[0])
                if ok:
                    out = entry[3](*payloads)
                    if out is None:
                        raise _Undefined()
                    return _code(entry[2], out)
        new = _try_f(t[1], sig)
        if new is not None:
            return (APP, new, t[2])
        new = _try_f(t[2], sig)
        if new is not None:
            return (APP, t[1], new)
        return None
    if tag == ABS:
        new = _try_f(t[2], sig)
        if new is not None:
            return (ABS, t[1], new)
    return None


def _try_beta(t):
    """Contract the leftmost beta redex; None if t is beta-normal."""
    tag = t[0]
    if tag == APP:
        fun = t[1]
        if fun[0] == ABS:
            return substitute(fun[2], fun[1], t[2])
        new = _try_beta(fun)
        if new is not None:
            return (APP, new, t[2])
        new = _try_beta(t[2])
        if new is not None:
            return (APP, t[1], new)
        return None
    if tag == ABS:
        new = _try_beta(t[2])
        if new is not None:
            return (ABS, t[1], new)
    return None


def advance(t, sig, max_steps):
    """Run up to ``max_steps`` F-first leftmost steps.

    Returns (term, beta_count, f_count, status): STATUS_NORMAL when a
    normal form was reached before the budget, STATUS_RAN when the
    budget was consumed, STATUS_UNDEFINED on a partial-function miss.
    """
    beta = 0
    f = 0
    for _ in range(max_steps):
        try:
            new = _try_f(t, sig)
        except _Undefined:
            return (t, beta, f, STATUS_UNDEFINED)
        if new is not None:
            t = new
            f += 1
            continue
        new = _try_beta(t)
        if new is None:
            return (t, beta, f, STATUS_NORMAL)
        t = new
        beta += 1
    try:
        if _try_f(t, sig) is None and _try_beta(t) is None:
            return (t, beta, f, STATUS_NORMAL)
    except _Undefined:
        pass
    return (t, beta, f, STATUS_RAN)
