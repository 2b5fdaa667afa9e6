#pragma once

#include <lllmt/model.hh>

#include <iosfwd>
#include <string>

namespace lllmt {

/// Line-oriented instance format:
///
///     # comment (anywhere after '#')
///     vars <n>
///     dom <i> <v>:<p> <v>:<p> ...      one line per variable; values are 0..d-1, each listed once
///     ev (<i>,<j>) (<i>,<j>) ...       one line per bad-event, in id order
///
/// `vars` must come first; every variable needs exactly one `dom` line before
/// the first `ev`. Whitespace inside a term is allowed: "( 3 , 1 )".
/// Syntax errors throw InputError carrying the line number; semantic
/// problems (normalization, contradictory events) throw InvalidInstance.
auto read_instance(std::istream & in) -> Instance;
auto read_instance_file(const std::string & path) -> Instance;

/// Writes the format above with probabilities at round-trip precision.
void write_instance(std::ostream & out, const Instance & instance);

/// Parses a single atomic event "(i,j) (i,j) ..." (used for CLI targets).
auto parse_event(const std::string & text) -> BadEvent;

}
