#pragma once

// Flat key=value run configuration: '#' comments, blank lines ignored,
// comma-separated lists. Unknown and duplicate keys are rejected against
// a per-command schema so that typos fail fast instead of running with
// defaults.

#include <map>
#include <set>
#include <string>
#include <vector>

namespace hqc {

class RunConfig {
  public:
    static RunConfig parse_file(const std::string& path);
    static RunConfig parse_text(const std::string& text);

    // Throws std::runtime_error naming the offending key when a required
    // key is missing or an unknown key is present.
    void validate(const std::set<std::string>& required,
                  const std::set<std::string>& optional) const;

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key) const;
    long get_int(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

  private:
    std::map<std::string, std::string> kv_;
};

}  // namespace hqc
