#include "recon/bias.hpp"

#include "recon/errors.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace recon {

bool conforms(const LanguageBias& b, const Sentence& s) {
    Sentence c = canonicalize(s);
    int len = c.size();
    if (len < b.min_len || len > b.max_len) return false;
    if (b.max_vars && c.variable_count() > *b.max_vars) return false;
    if (b.connected && !is_connected(c)) return false;
    if (b.variables_only) {
        for (const auto& a : c.atoms())
            for (const auto& t : a.terms)
                if (!t.is_variable()) return false;
    }
    if (b.require_core && reduce_core(c) != c) return false;
    return true;
}

namespace {

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw BiasError("bias key '" + key + "' needs true or false, got '" + value + "'");
}

int parse_int(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw BiasError("bias key '" + key + "' needs an integer, got '" + value + "'");
    }
}

void apply_assignment(LanguageBias& b, const std::string& key, const std::string& value) {
    if (key == "min_len") {
        b.min_len = parse_int(value, key);
    } else if (key == "max_len") {
        b.max_len = parse_int(value, key);
    } else if (key == "max_vars") {
        if (value == "none" || value == "unset")
            b.max_vars.reset();
        else
            b.max_vars = parse_int(value, key);
    } else if (key == "connected") {
        b.connected = parse_bool(value, key);
    } else if (key == "variables_only") {
        b.variables_only = parse_bool(value, key);
    } else if (key == "require_core") {
        b.require_core = parse_bool(value, key);
    } else {
        throw BiasError("unknown bias key '" + key + "'");
    }
}

void validate(const LanguageBias& b) {
    if (b.min_len < 1) throw BiasError("min_len must be >= 1");
    if (b.max_len < b.min_len) throw BiasError("max_len must be >= min_len");
    if (b.max_vars && *b.max_vars < 1) throw BiasError("max_vars must be >= 1 or none");
}

} // namespace

LanguageBias parse_bias_text(const std::string& text) {
    LanguageBias b;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto cut = line.find_first_of("#%"); cut != std::string::npos) line.resize(cut);
        std::string body = trim(line);
        if (body.empty()) continue;
        auto eq = body.find('=');
        if (eq == std::string::npos)
            throw BiasError("line " + std::to_string(line_no) +
                            ": expected `key = value`, got '" + body + "'");
        apply_assignment(b, trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
    }
    validate(b);
    return b;
}

LanguageBias parse_bias_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BiasError("cannot open bias file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_bias_text(buf.str());
}

std::string bias_to_header(const LanguageBias& b) {
    std::ostringstream out;
    out << "min_len=" << b.min_len << " max_len=" << b.max_len << " max_vars="
        << (b.max_vars ? std::to_string(*b.max_vars) : std::string("none"))
        << " connected=" << (b.connected ? "true" : "false")
        << " variables_only=" << (b.variables_only ? "true" : "false")
        << " require_core=" << (b.require_core ? "true" : "false");
    return out.str();
}

LanguageBias parse_bias_header(const std::string& line) {
    LanguageBias b;
    std::istringstream in(line);
    std::string token;
    while (in >> token) {
        auto eq = token.find('=');
        if (eq == std::string::npos)
            throw BiasError("malformed bias echo token '" + token + "'");
        apply_assignment(b, token.substr(0, eq), token.substr(eq + 1));
    }
    validate(b);
    return b;
}

std::string write_bias(const LanguageBias& b) {
    std::ostringstream out;
    out << "min_len = " << b.min_len << "\n"
        << "max_len = " << b.max_len << "\n"
        << "max_vars = " << (b.max_vars ? std::to_string(*b.max_vars) : std::string("none"))
        << "\n"
        << "connected = " << (b.connected ? "true" : "false") << "\n"
        << "variables_only = " << (b.variables_only ? "true" : "false") << "\n"
        << "require_core = " << (b.require_core ? "true" : "false") << "\n";
    return out.str();
}

} // namespace recon
