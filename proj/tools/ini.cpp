#include "ini.hpp"

#include <cerrno>
#include <climits>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cli {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail_at(const std::string& name, int line, const std::string& what) {
    std::ostringstream os;
    os << name << ":" << line << ": " << what;
    throw ConfigError(os.str());
}

double parse_double(const std::string& name, const std::string& raw) {
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(raw.c_str(), &end);
    if (end == raw.c_str() || *end != '\0' || errno == ERANGE)
        throw ConfigError(name + ": not a number: '" + raw + "'");
    return v;
}

int parse_int(const std::string& name, const std::string& raw) {
    errno = 0;
    char* end = nullptr;
    long v = std::strtol(raw.c_str(), &end, 10);
    if (end == raw.c_str() || *end != '\0' || errno == ERANGE || v < INT_MIN ||
        v > INT_MAX)
        throw ConfigError(name + ": not an integer: '" + raw + "'");
    return static_cast<int>(v);
}

}  // namespace

IniConfig IniConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse(os.str(), path);
}

IniConfig IniConfig::parse(const std::string& text, const std::string& name) {
    IniConfig cfg;
    cfg.m_name = name;
    std::istringstream in(text);
    std::string line;
    std::string section;
    bool have_section = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                fail_at(name, lineno, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) fail_at(name, lineno, "empty section name");
            have_section = true;
            cfg.m_sections[section];  // a section may legitimately stay empty
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            fail_at(name, lineno, "expected key = value or [section]");
        if (!have_section) fail_at(name, lineno, "key before any [section] header");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail_at(name, lineno, "empty key");
        auto& sec = cfg.m_sections[section];
        auto it = sec.find(key);
        if (it != sec.end())
            fail_at(name, lineno,
                    "duplicate key '" + key + "' (first set at line " +
                        std::to_string(it->second.line) + ")");
        sec[key] = Entry{value, lineno};
    }
    return cfg;
}

bool IniConfig::has_section(const std::string& section) const {
    return m_sections.count(section) != 0;
}

bool IniConfig::has_key(const std::string& section, const std::string& key) const {
    auto it = m_sections.find(section);
    return it != m_sections.end() && it->second.count(key) != 0;
}

const IniConfig::Entry& IniConfig::entry(const std::string& section,
                                         const std::string& key) const {
    auto it = m_sections.find(section);
    if (it == m_sections.end())
        throw ConfigError(m_name + ": missing section [" + section + "]");
    auto jt = it->second.find(key);
    if (jt == it->second.end())
        throw ConfigError(m_name + ": missing key '" + key + "' in section [" +
                          section + "]");
    return jt->second;
}

std::string IniConfig::get_string(const std::string& section,
                                  const std::string& key) const {
    return entry(section, key).value;
}

double IniConfig::get_double(const std::string& section, const std::string& key) const {
    const Entry& e = entry(section, key);
    return parse_double(m_name + ":" + std::to_string(e.line), e.value);
}

int IniConfig::get_int(const std::string& section, const std::string& key) const {
    const Entry& e = entry(section, key);
    return parse_int(m_name + ":" + std::to_string(e.line), e.value);
}

bool IniConfig::get_bool(const std::string& section, const std::string& key) const {
    const Entry& e = entry(section, key);
    if (e.value == "true" || e.value == "1") return true;
    if (e.value == "false" || e.value == "0") return false;
    throw ConfigError(m_name + ":" + std::to_string(e.line) +
                      ": not a boolean (true/false): '" + e.value + "'");
}

std::vector<double> IniConfig::get_doubles(const std::string& section,
                                           const std::string& key) const {
    const Entry& e = entry(section, key);
    std::istringstream in(e.value);
    std::vector<double> out;
    std::string tok;
    while (in >> tok)
        out.push_back(parse_double(m_name + ":" + std::to_string(e.line), tok));
    if (out.empty())
        throw ConfigError(m_name + ":" + std::to_string(e.line) + ": empty list for '" +
                          key + "'");
    return out;
}

std::vector<int> IniConfig::get_ints(const std::string& section,
                                     const std::string& key) const {
    const Entry& e = entry(section, key);
    std::istringstream in(e.value);
    std::vector<int> out;
    std::string tok;
    while (in >> tok)
        out.push_back(parse_int(m_name + ":" + std::to_string(e.line), tok));
    if (out.empty())
        throw ConfigError(m_name + ":" + std::to_string(e.line) + ": empty list for '" +
                          key + "'");
    return out;
}

std::string IniConfig::get_string_or(const std::string& section, const std::string& key,
                                     const std::string& fallback) const {
    return has_key(section, key) ? get_string(section, key) : fallback;
}

double IniConfig::get_double_or(const std::string& section, const std::string& key,
                                double fallback) const {
    return has_key(section, key) ? get_double(section, key) : fallback;
}

int IniConfig::get_int_or(const std::string& section, const std::string& key,
                          int fallback) const {
    return has_key(section, key) ? get_int(section, key) : fallback;
}

bool IniConfig::get_bool_or(const std::string& section, const std::string& key,
                            bool fallback) const {
    return has_key(section, key) ? get_bool(section, key) : fallback;
}

std::map<std::string, std::string> IniConfig::flattened() const {
    std::map<std::string, std::string> flat;
    for (const auto& [sec, entries] : m_sections)
        for (const auto& [key, e] : entries) flat[sec + "." + key] = e.value;
    return flat;
}

void IniConfig::set(const std::string& section, const std::string& key,
                    const std::string& value) {
    auto& e = m_sections[section][key];
    e.value = value;
    if (e.line == 0) e.line = -1;  // synthetic entry, no source line
}

}  // namespace cli
