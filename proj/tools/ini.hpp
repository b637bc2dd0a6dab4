// Minimal INI-style config reader: [section] headers, key = value lines,
// '#' comments, UTF-8 text.  Errors carry the file name and line number.
#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IniConfig {
public:
    // Parses the file; throws ConfigError on syntax problems.
    static IniConfig load(const std::string& path);
    // Parses from a string (diagnostics use `name` as the file label).
    static IniConfig parse(const std::string& text, const std::string& name);

    bool has_section(const std::string& section) const;
    bool has_key(const std::string& section, const std::string& key) const;

    // Required lookups throw ConfigError naming the section and key.
    std::string get_string(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key) const;
    int get_int(const std::string& section, const std::string& key) const;
    bool get_bool(const std::string& section, const std::string& key) const;
    std::vector<double> get_doubles(const std::string& section,
                                    const std::string& key) const;
    std::vector<int> get_ints(const std::string& section, const std::string& key) const;

    // Defaulted lookups.
    std::string get_string_or(const std::string& section, const std::string& key,
                              const std::string& fallback) const;
    double get_double_or(const std::string& section, const std::string& key,
                         double fallback) const;
    int get_int_or(const std::string& section, const std::string& key,
                   int fallback) const;
    bool get_bool_or(const std::string& section, const std::string& key,
                     bool fallback) const;

    // Flat echo of every parsed entry as "section.key" -> value, for reports.
    std::map<std::string, std::string> flattened() const;

    // Overrides a value in place (used for --seed and similar flags).
    void set(const std::string& section, const std::string& key,
             const std::string& value);

private:
    struct Entry {
        std::string value;
        int line = 0;
    };
    std::string m_name;
    std::map<std::string, std::map<std::string, Entry>> m_sections;

    const Entry& entry(const std::string& section, const std::string& key) const;
};

}  // namespace cli
