#pragma once

// Frame description files.
//
//   # comment
//   m: s:2, t:1            atom species and counts ("m:" for an empty pool)
//   M: a, b                classical tags, non-empty
//   kind: standard | symmetric | custom
//   types: <e1>, <e1,e2>   tuple types the frame materializes
//   domain <e1>: {}, {(s.0), (s.1)}     custom frames: the listed relations
//   denote P^<e1>: {(s.0)}              optional constant images
//   assign X^e1: s.1                    optional variable assignments
//
// Elements: atoms are written species.index (indices are per species,
// 0-based, representation-level only), classical elements by their tag, and
// relations as {(elem, ...), ...} with rows in ascending order. The same
// grammar is used verbatim when reports dump a counterexample, so any
// report can be re-loaded as a frame description.

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

#include "veil/model.hpp"
#include "veil/parse.hpp"

namespace veil::model {

struct FrameDocument {
  FrameSpec spec;
  std::map<std::string, Value> denotation;
  std::map<std::string, Value> valuation;
  lang::SymbolTable symbols;  // names declared by denote/assign lines
};

FrameDocument parse_frame_document(std::istream& in);
FrameDocument parse_frame_document_text(std::string_view text);

std::string to_text(const FrameDocument& doc);

/// Element in the document grammar (s.0, a, {(s.0), (s.1)}, ...).
std::string value_to_text(const FrameSpec& spec, const Value& v);
Value parse_value_text(const FrameSpec& spec, const lang::TypeExpr& type,
                       std::string_view text);

/// A counterexample or witness point as a reloadable frame document.
FrameDocument document_from_point(const InterpretationPoint& point);

}  // namespace veil::model
