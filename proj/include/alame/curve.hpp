#pragma once

// Column-oriented sampled data with ordered metadata, emitted as CSV
// (#-prefixed metadata lines, header row, 17 significant digits) or as the
// mirroring JSON document.

#include <string>
#include <utility>
#include <vector>

namespace alame {

class SampledCurve {
public:
    void add_column(std::string name, std::vector<double> values);
    void set_meta(std::string key, std::string value);
    void set_meta(std::string key, double value);

    size_t rows() const;
    size_t columns() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<double>& column(const std::string& name) const;
    const std::vector<std::pair<std::string, std::string>>& metadata() const {
        return meta_;
    }
    std::string meta(const std::string& key) const; // "" when absent

    std::string to_csv() const;
    std::string to_json() const;
    static SampledCurve from_csv(const std::string& text);
    static SampledCurve from_json(const std::string& text);

private:
    std::vector<std::string> names_;
    std::vector<std::vector<double>> cols_;
    std::vector<std::pair<std::string, std::string>> meta_;
};

/// Lossless double formatting (17 significant digits).
std::string format_g17(double v);

} // namespace alame
