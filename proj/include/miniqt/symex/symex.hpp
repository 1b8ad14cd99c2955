#pragma once

#include "miniqt/goto/goto_program.hpp"
#include "miniqt/resource.hpp"
#include "miniqt/symex/ssa.hpp"

namespace miniqt::symex {

inline constexpr const char *kUnwindingMessage = "unwinding assertion";
inline constexpr const char *kRecursionMessage = "recursion unwinding assertion";

/// Symbolically executes `p` from its entry function.
///
/// Calls are inlined (one SSA scope per activation); each loop back-edge is
/// followed at most `config.unwind` times per activation, after which the
/// loop condition is claimed false (or assumed false when unwinding
/// assertions are off). Branches re-join through ite-based phi equations.
SsaSystem symex(const gotoir::GotoProgram &p, const VerifierConfig &config,
                ResourceGuard *guard = nullptr);

} // namespace miniqt::symex
