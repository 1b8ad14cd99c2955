#pragma once

#include "miniqt/frontend/ast.hpp"
#include "miniqt/goto/goto_program.hpp"

namespace miniqt::gotoir {

inline constexpr const char *kBoundsMessage = "array bounds violated";

/// Lowers a typed program into GOTO functions. `while`/`for`/`if` become
/// guarded GOTOs, calls are hoisted into CALL instructions, `&&`/`||` with
/// side effects short-circuit through temporaries, and every array access
/// is preceded by a bounds ASSERT.
GotoProgram lower_to_goto(const frontend::TypedAst &ast);

} // namespace miniqt::gotoir
