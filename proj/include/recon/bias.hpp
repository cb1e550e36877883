#pragma once

#include "recon/logic.hpp"

#include <optional>
#include <string>

namespace recon {

// Syntactic constraints on the sentences a run may consider.
struct LanguageBias {
    int min_len = 1;
    int max_len = 3;
    std::optional<int> max_vars;
    bool connected = true;
    bool variables_only = true;
    bool require_core = true;

    friend bool operator==(const LanguageBias&, const LanguageBias&) = default;
};

// Membership of a sentence in the language the bias describes. The sentence
// is canonicalized first, so callers may pass any variable naming.
bool conforms(const LanguageBias& b, const Sentence& s);

// Bias config text: `key = value` lines, keys min_len, max_len, max_vars,
// connected, variables_only, require_core; `#` or `%` start comments; absent
// keys keep their defaults; `max_vars = none` clears the variable cap.
LanguageBias parse_bias_text(const std::string& text);
LanguageBias parse_bias_file(const std::string& path);

// Single-line echo, `key=value` space-separated (used in theory file headers).
std::string bias_to_header(const LanguageBias& b);
// Parses the single-line echo form back.
LanguageBias parse_bias_header(const std::string& line);

// Multi-line config file form.
std::string write_bias(const LanguageBias& b);

} // namespace recon
