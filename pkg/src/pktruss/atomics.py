"""Lock-free read-modify-write on numpy array elements from numba code.

numba exposes no CPU atomics, so these lower straight to LLVM ``atomicrmw``
with monotonic (relaxed) ordering. Visibility between phases comes from the
thread joins that separate them.
"""
from numba import types
from numba.core import cgutils
from numba.extending import intrinsic


def _rmw(op):
    def impl(typingctx, arr, idx, val):
        if not isinstance(arr, types.Array) or not isinstance(arr.dtype, types.Integer):
            return None
        sig = arr.dtype(arr, types.intp, arr.dtype)

        def codegen(context, builder, signature, args):
            aryty = signature.args[0]
            ary = context.make_array(aryty)(context, builder, args[0])
            ptr = cgutils.get_item_pointer(
                context, builder, aryty, ary, [args[1]], wraparound=False
            )
            return builder.atomic_rmw(op, ptr, args[2], "monotonic")

        return sig, codegen

    return intrinsic(impl)


# Each returns the value held *before* the update.
fetch_add = _rmw("add")
fetch_sub = _rmw("sub")
