#pragma once

#include <json.hpp>

#include "asnf/derivation.hpp"
#include "asnf/grammar.hpp"
#include "asnf/trace.hpp"

namespace asnf {

/// Carries a derivation of `input` over to the grammar the transform
/// produced, stage by stage. The result derives the same sentential form in
/// replay_trace(input, trace). Throws TRACE_MISMATCH when the trace does not
/// fit the input or a stage cannot be lifted, INVALID_DERIVATION when `d` is
/// not a derivation of `input`.
Derivation lift_derivation(const TransformTrace& trace, const Grammar& input, const Derivation& d);

/// Copy of `input` with the trace's fresh symbols registered, so that
/// trace_from_json can resolve them before the output grammar is known.
Grammar register_fresh_symbols(const Grammar& input, const nlohmann::json& trace_json);

}  // namespace asnf
