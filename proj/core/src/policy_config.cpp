#include "admit/feature_axes.hpp"
#include "admit/policy.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <unordered_map>

namespace admit {

using nlohmann::json;

ExtractorRegistry default_extractors() {
    ExtractorRegistry reg;
    for (const auto& r : {kLtvReadout, kFicoReadout, kDtiReadout}) {
        reg.emplace(r.id, FeatureExtractor::calibrated(r.id, UnitVector::basis(kFeatureDim, r.axis), r.scale, r.offset,
                                                       r.resolution));
    }
    return reg;
}

namespace {

json extractor_json(const AxisReadout& r) {
    std::vector<double> dir(kFeatureDim, 0.0);
    dir[r.axis] = 1.0;
    return {{"id", r.id}, {"kind", "calibrated"}, {"direction", dir}, {"scale", r.scale}, {"offset", r.offset},
            {"resolution", r.resolution}};
}

json indicator_json(double max_ltv, double min_fico) {
    return {{"kind", "indicator"},
            {"features",
             {{{"extractor_id", "ltv"}, {"op", "<="}, {"value", max_ltv}},
              {{"extractor_id", "fico"}, {"op", ">="}, {"value", min_fico}}}}};
}

std::string build_default_config() {
    json doc;
    doc["extractors"] = {extractor_json(kLtvReadout), extractor_json(kFicoReadout), extractor_json(kDtiReadout)};
    doc["regimes"] = {
        {{"name", "STRICT"}, {"tau", 0.5}, {"prior", indicator_json(0.80, 700)}},
        {{"name", "STANDARD"}, {"tau", 0.5}, {"prior", indicator_json(0.90, 660)}},
        {{"name", "RELAXED"}, {"tau", 0.5}, {"prior", indicator_json(0.97, 620)}},
    };
    return doc.dump(2) + "\n";
}

// Line of every value in a syntactically valid JSON document, keyed by JSON
// pointer. Used only to attach line numbers to semantic errors.
class LineIndex {
public:
    explicit LineIndex(std::string_view text) : text_(text) {
        skip_ws();
        if (pos_ < text_.size()) value("");
    }

    std::size_t line_of(const std::string& pointer) const {
        auto it = lines_.find(pointer);
        return it == lines_.end() ? 0 : it->second;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            if (text_[pos_] == '\n') ++line_;
            ++pos_;
        }
    }

    std::string string_token() {
        std::string out;
        ++pos_;  // opening quote
        while (pos_ < text_.size() && text_[pos_] != '"') {
            if (text_[pos_] == '\\') ++pos_;
            if (pos_ < text_.size()) out += text_[pos_++];
        }
        ++pos_;
        return out;
    }

    static std::string escape(const std::string& key) {
        std::string out;
        for (char c : key) {
            if (c == '~') out += "~0";
            else if (c == '/') out += "~1";
            else out += c;
        }
        return out;
    }

    void value(const std::string& path) {
        skip_ws();
        if (pos_ >= text_.size()) return;
        lines_.emplace(path, line_);
        const char c = text_[pos_];
        if (c == '{') {
            ++pos_;
            skip_ws();
            while (pos_ < text_.size() && text_[pos_] != '}') {
                const std::string key = string_token();
                skip_ws();
                ++pos_;  // ':'
                value(path + "/" + escape(key));
                skip_ws();
                if (pos_ < text_.size() && text_[pos_] == ',') ++pos_;
                skip_ws();
            }
            ++pos_;
        } else if (c == '[') {
            ++pos_;
            skip_ws();
            std::size_t i = 0;
            while (pos_ < text_.size() && text_[pos_] != ']') {
                value(path + "/" + std::to_string(i++));
                skip_ws();
                if (pos_ < text_.size() && text_[pos_] == ',') ++pos_;
                skip_ws();
            }
            ++pos_;
        } else if (c == '"') {
            string_token();
        } else {
            while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
                   text_[pos_] != ',' && text_[pos_] != ']' && text_[pos_] != '}') {
                ++pos_;
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::unordered_map<std::string, std::size_t> lines_;
};

class ConfigReader {
public:
    explicit ConfigReader(const LineIndex& lines) : lines_(lines) {}

    [[noreturn]] void fail(const std::string& pointer, const std::string& what) const {
        std::size_t line = lines_.line_of(pointer);
        // Missing keys have no line of their own; report the enclosing object.
        for (std::string p = pointer; line == 0 && !p.empty();) {
            p = p.substr(0, p.rfind('/'));
            line = lines_.line_of(p);
        }
        throw ConfigParseError(pointer.empty() ? "/" : pointer, line, what);
    }

    const json& member(const json& obj, const std::string& pointer, const char* key) const {
        if (!obj.is_object()) fail(pointer, "expected an object");
        auto it = obj.find(key);
        if (it == obj.end()) fail(pointer + "/" + key, "missing required field");
        return *it;
    }

    double number(const json& v, const std::string& pointer) const {
        if (!v.is_number()) fail(pointer, "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) fail(pointer, "expected a finite number");
        return x;
    }

    std::string string(const json& v, const std::string& pointer) const {
        if (!v.is_string()) fail(pointer, "expected a string");
        return v.get<std::string>();
    }

    const json& array(const json& v, const std::string& pointer) const {
        if (!v.is_array()) fail(pointer, "expected an array");
        return v;
    }

    FeatureExtractor extractor(const json& e, const std::string& p) const {
        const std::string id = string(member(e, p, "id"), p + "/id");
        const std::string kind = string(member(e, p, "kind"), p + "/kind");
        const json& dir = array(member(e, p, "direction"), p + "/direction");
        std::vector<double> coords;
        for (std::size_t i = 0; i < dir.size(); ++i) coords.push_back(number(dir[i], p + "/direction/" + std::to_string(i)));
        const double scale = number(member(e, p, "scale"), p + "/scale");
        const double offset = number(member(e, p, "offset"), p + "/offset");
        try {
            UnitVector direction = normalize(std::span<const double>(coords));
            if (kind == "linear" || kind == "LinearProjection") {
                return FeatureExtractor::linear(id, std::move(direction), scale, offset);
            }
            if (kind == "calibrated" || kind == "CalibratedProjection") {
                const double res = number(member(e, p, "resolution"), p + "/resolution");
                return FeatureExtractor::calibrated(id, std::move(direction), scale, offset, res);
            }
        } catch (const ConfigParseError&) {
            throw;
        } catch (const Error& err) {
            fail(p, err.what());
        }
        fail(p + "/kind", "unknown extractor kind '" + kind + "'");
    }

    PolicyPrior prior(const json& obj, const std::string& p, const std::string& default_id,
                      const ExtractorRegistry& registry) const {
        const std::string kind = string(member(obj, p, "kind"), p + "/kind");
        std::string id = default_id;
        if (auto it = obj.find("id"); it != obj.end()) id = string(*it, p + "/id");
        try {
            if (kind == "indicator") {
                const json& feats = array(member(obj, p, "features"), p + "/features");
                std::vector<FeatureCondition> conds;
                for (std::size_t i = 0; i < feats.size(); ++i) {
                    const std::string fp = p + "/features/" + std::to_string(i);
                    const std::string ext = string(member(feats[i], fp, "extractor_id"), fp + "/extractor_id");
                    const std::string op = string(member(feats[i], fp, "op"), fp + "/op");
                    const double value = number(member(feats[i], fp, "value"), fp + "/value");
                    auto found = registry.find(ext);
                    if (found == registry.end()) fail(fp + "/extractor_id", "unknown extractor '" + ext + "'");
                    Comparison cmp;
                    if (op == "<=") cmp = Comparison::AtMost;
                    else if (op == ">=") cmp = Comparison::AtLeast;
                    else fail(fp + "/op", "op must be \"<=\" or \">=\"");
                    conds.push_back(FeatureCondition{found->second, cmp, value});
                }
                return PolicyPrior::indicator(id, std::move(conds));
            }
            if (kind == "smooth_cap") {
                const json& ax = array(member(obj, p, "axis"), p + "/axis");
                std::vector<double> coords;
                for (std::size_t i = 0; i < ax.size(); ++i) coords.push_back(number(ax[i], p + "/axis/" + std::to_string(i)));
                const double kappa = number(member(obj, p, "kappa"), p + "/kappa");
                return PolicyPrior::smooth_cap(id, normalize(std::span<const double>(coords)), kappa);
            }
            if (kind == "product") {
                const json& kids = array(member(obj, p, "children"), p + "/children");
                std::vector<PolicyPrior> children;
                for (std::size_t i = 0; i < kids.size(); ++i) {
                    children.push_back(prior(kids[i], p + "/children/" + std::to_string(i), id + "/" + std::to_string(i), registry));
                }
                return PolicyPrior::product(id, std::move(children));
            }
            if (kind == "constant") {
                return PolicyPrior::constant(id, number(member(obj, p, "value"), p + "/value"));
            }
        } catch (const ConfigParseError&) {
            throw;
        } catch (const Error& err) {
            fail(p, err.what());
        }
        fail(p + "/kind", "unknown prior kind '" + kind + "'");
    }

private:
    const LineIndex& lines_;
};

}  // namespace

const std::string& default_regime_config_text() {
    static const std::string text = build_default_config();
    return text;
}

RegimeConfig parse_regime_config(std::string_view text, const ExtractorRegistry& fallback) {
    RegimeConfig out;
    out.extractors = fallback;
    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) return out;

    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
        const std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
        throw ConfigParseError("", line, "malformed JSON");
    }

    const LineIndex lines(text);
    const ConfigReader reader(lines);
    if (!doc.is_object()) reader.fail("", "top level must be an object");

    if (auto it = doc.find("extractors"); it != doc.end()) {
        const json& list = reader.array(*it, "/extractors");
        out.extractors.clear();
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string p = "/extractors/" + std::to_string(i);
            FeatureExtractor e = reader.extractor(list[i], p);
            const std::string id = e.id();
            if (!out.extractors.emplace(id, std::move(e)).second) reader.fail(p + "/id", "duplicate extractor id '" + id + "'");
        }
    }

    auto it = doc.find("regimes");
    if (it == doc.end()) return out;
    const json& list = reader.array(*it, "/regimes");
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string p = "/regimes/" + std::to_string(i);
        const std::string name = reader.string(reader.member(list[i], p, "name"), p + "/name");
        if (name.empty()) reader.fail(p + "/name", "regime name must be nonempty");
        for (const auto& r : out.regimes)
            if (r.name == name) reader.fail(p + "/name", "duplicate regime name '" + name + "'");
        const double tau = reader.number(reader.member(list[i], p, "tau"), p + "/tau");
        if (!(tau >= 0.0 && tau <= 1.0)) reader.fail(p + "/tau", "tau must lie in [0, 1]");
        PolicyPrior prior = reader.prior(reader.member(list[i], p, "prior"), p + "/prior", name, out.extractors);
        out.regimes.push_back(PolicyRegime{name, std::move(prior), tau});
    }
    return out;
}

std::vector<PolicyRegime> parse_regimes(std::string_view text, const ExtractorRegistry& fallback) {
    return parse_regime_config(text, fallback).regimes;
}

}  // namespace admit
