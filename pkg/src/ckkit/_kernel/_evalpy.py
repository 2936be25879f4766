"""Pure-Python evaluation kernel.

Evaluates a postfix formula program over a batch of bitmask-encoded
models.  Semantically identical to the compiled kernel in _evalcore.pyx;
kept deliberately simple so it can serve as its reference.

Opcodes (args is the atom's prop index for OP_ATOM, -1 for a proposition
missing from the model's valuation, unused otherwise):

  0 ATOM   push V(P) (or the fallible mask if the prop is unknown)
  1 FALSUM push the fallible mask
  2 AND    bitwise and
  3 OR     bitwise or
  4 IMP    w set iff every <=-successor of w in A is in B
  5 BOX    w set iff all R-successors of all <=-successors of w are in A
  6 DIA    guarded diamond: w set iff every <=-successor of w has an
           R-successor in A
  7 DIAC   classical diamond: w set iff some R-successor of w is in A
"""

OP_ATOM = 0
OP_FALSUM = 1
OP_AND = 2
OP_OR = 3
OP_IMP = 4
OP_BOX = 5
OP_DIA = 6
OP_DIAC = 7


def eval_programs(ops, args, n, up, rel, fallible, vals, out):
    """Run the program over every model; out[i] gets the truth mask of model i."""
    full = (1 << n) - 1
    length = len(ops)
    for i in range(len(out)):
        stack = []
        fal = int(fallible[i])
        for k in range(length):
            op = ops[k]
            if op == OP_ATOM:
                a = args[k]
                stack.append(int(vals[i][a]) if a >= 0 else fal)
            elif op == OP_FALSUM:
                stack.append(fal)
            elif op == OP_AND:
                b = stack.pop()
                stack[-1] &= b
            elif op == OP_OR:
                b = stack.pop()
                stack[-1] |= b
            elif op == OP_IMP:
                b = stack.pop()
                a = stack.pop()
                bad = a & (full ^ b)
                m = 0
                for w in range(n):
                    if not int(up[i][w]) & bad:
                        m |= 1 << w
                stack.append(m)
            elif op == OP_BOX:
                a = stack.pop()
                na = full ^ a
                safe = 0
                for w in range(n):
                    if not int(rel[i][w]) & na:
                        safe |= 1 << w
                nsafe = full ^ safe
                m = 0
                for w in range(n):
                    if not int(up[i][w]) & nsafe:
                        m |= 1 << w
                stack.append(m)
            elif op == OP_DIA:
                a = stack.pop()
                hit = 0
                for w in range(n):
                    if int(rel[i][w]) & a:
                        hit |= 1 << w
                nhit = full ^ hit
                m = 0
                for w in range(n):
                    if not int(up[i][w]) & nhit:
                        m |= 1 << w
                stack.append(m)
            elif op == OP_DIAC:
                a = stack.pop()
                m = 0
                for w in range(n):
                    if int(rel[i][w]) & a:
                        m |= 1 << w
                stack.append(m)
            else:
                raise ValueError(f"bad opcode {op}")
        out[i] = stack[-1]
