#include "alame/curve.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace alame {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void SampledCurve::add_column(std::string name, std::vector<double> values) {
    if (!cols_.empty() && values.size() != cols_.front().size())
        throw std::invalid_argument("SampledCurve: column length mismatch");
    names_.push_back(std::move(name));
    cols_.push_back(std::move(values));
}

void SampledCurve::set_meta(std::string key, std::string value) {
    for (auto& kv : meta_)
        if (kv.first == key) {
            kv.second = std::move(value);
            return;
        }
    meta_.emplace_back(std::move(key), std::move(value));
}

void SampledCurve::set_meta(std::string key, double value) {
    set_meta(std::move(key), format_g17(value));
}

size_t SampledCurve::rows() const { return cols_.empty() ? 0 : cols_.front().size(); }

const std::vector<double>& SampledCurve::column(const std::string& name) const {
    for (size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name)
            return cols_[i];
    throw std::out_of_range("SampledCurve: no column named " + name);
}

std::string SampledCurve::meta(const std::string& key) const {
    for (const auto& kv : meta_)
        if (kv.first == key)
            return kv.second;
    return {};
}

std::string SampledCurve::to_csv() const {
    std::ostringstream os;
    for (const auto& kv : meta_)
        os << "# " << kv.first << " = " << kv.second << "\n";
    for (size_t i = 0; i < names_.size(); ++i)
        os << (i ? "," : "") << names_[i];
    os << "\n";
    for (size_t r = 0; r < rows(); ++r) {
        for (size_t i = 0; i < cols_.size(); ++i)
            os << (i ? "," : "") << format_g17(cols_[i][r]);
        os << "\n";
    }
    return os.str();
}

SampledCurve SampledCurve::from_csv(const std::string& text) {
    SampledCurve c;
    std::istringstream is(text);
    std::string line;
    bool have_header = false;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                auto trim = [](std::string s) {
                    const auto b = s.find_first_not_of(" \t#");
                    const auto e = s.find_last_not_of(" \t\r");
                    return (b == std::string::npos) ? std::string{}
                                                    : s.substr(b, e - b + 1);
                };
                c.set_meta(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
            }
            continue;
        }
        std::vector<std::string> fields;
        std::string f;
        std::istringstream ls(line);
        while (std::getline(ls, f, ','))
            fields.push_back(f);
        if (!have_header) {
            for (auto& name : fields) {
                if (!name.empty() && name.back() == '\r')
                    name.pop_back();
                c.names_.push_back(name);
            }
            c.cols_.assign(c.names_.size(), {});
            have_header = true;
        } else {
            if (fields.size() != c.names_.size())
                throw std::invalid_argument("SampledCurve::from_csv: ragged row");
            for (size_t i = 0; i < fields.size(); ++i)
                c.cols_[i].push_back(std::strtod(fields[i].c_str(), nullptr));
        }
    }
    return c;
}

std::string SampledCurve::to_json() const {
    nlohmann::ordered_json j;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& kv : meta_)
        meta[kv.first] = kv.second;
    j["metadata"] = meta;
    nlohmann::ordered_json cols = nlohmann::ordered_json::object();
    for (size_t i = 0; i < names_.size(); ++i)
        cols[names_[i]] = cols_[i];
    j["columns"] = cols;
    return j.dump(2);
}

SampledCurve SampledCurve::from_json(const std::string& text) {
    const auto j = nlohmann::ordered_json::parse(text);
    SampledCurve c;
    for (const auto& [k, v] : j.at("metadata").items())
        c.set_meta(k, v.get<std::string>());
    for (const auto& [k, v] : j.at("columns").items())
        c.add_column(k, v.get<std::vector<double>>());
    return c;
}

} // namespace alame
