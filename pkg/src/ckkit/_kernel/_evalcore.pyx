# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled evaluation kernel: postfix formula programs over bitmask models.

Must stay behaviourally identical to _evalpy.eval_programs, which is the
reference implementation.  Models are limited to 63 worlds and programs
to a stack depth of 64 (the Python wrapper enforces both).
"""

from libc.stdint cimport int32_t, uint64_t


def eval_programs(int32_t[::1] ops, int32_t[::1] args, int n,
                  uint64_t[:, ::1] up, uint64_t[:, ::1] rel,
                  uint64_t[::1] fallible, uint64_t[:, ::1] vals,
                  uint64_t[::1] out):
    cdef Py_ssize_t nmodels = out.shape[0]
    cdef Py_ssize_t length = ops.shape[0]
    cdef uint64_t full = ((<uint64_t>1) << n) - 1
    cdef uint64_t stack[64]
    cdef uint64_t a, b, m, safe, hit, bad, fal
    cdef Py_ssize_t i, k
    cdef int w, sp
    cdef int32_t op

    for i in range(nmodels):
        sp = 0
        fal = fallible[i]
        for k in range(length):
            op = ops[k]
            if op == 0:    # ATOM
                if args[k] >= 0:
                    stack[sp] = vals[i, args[k]]
                else:
                    stack[sp] = fal
                sp += 1
            elif op == 1:  # FALSUM
                stack[sp] = fal
                sp += 1
            elif op == 2:  # AND
                sp -= 1
                stack[sp - 1] = stack[sp - 1] & stack[sp]
            elif op == 3:  # OR
                sp -= 1
                stack[sp - 1] = stack[sp - 1] | stack[sp]
            elif op == 4:  # IMP
                b = stack[sp - 1]
                a = stack[sp - 2]
                bad = a & (full ^ b)
                m = 0
                for w in range(n):
                    if not (up[i, w] & bad):
                        m |= (<uint64_t>1) << w
                sp -= 1
                stack[sp - 1] = m
            elif op == 5:  # BOX
                a = stack[sp - 1]
                a = full ^ a
                safe = 0
                for w in range(n):
                    if not (rel[i, w] & a):
                        safe |= (<uint64_t>1) << w
                safe = full ^ safe
                m = 0
                for w in range(n):
                    if not (up[i, w] & safe):
                        m |= (<uint64_t>1) << w
                stack[sp - 1] = m
            elif op == 6:  # DIA (guarded)
                a = stack[sp - 1]
                hit = 0
                for w in range(n):
                    if rel[i, w] & a:
                        hit |= (<uint64_t>1) << w
                hit = full ^ hit
                m = 0
                for w in range(n):
                    if not (up[i, w] & hit):
                        m |= (<uint64_t>1) << w
                stack[sp - 1] = m
            elif op == 7:  # DIAC (classical)
                a = stack[sp - 1]
                m = 0
                for w in range(n):
                    if rel[i, w] & a:
                        m |= (<uint64_t>1) << w
                stack[sp - 1] = m
            else:
                raise ValueError("bad opcode")
        out[i] = stack[sp - 1]
