#include "hyperstab/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "hyperstab/errors.hpp"

namespace hyperstab {

using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double number_at(const json& j, const std::string& path) {
    if (!j.is_number()) throw InputError("config: " + path + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw InputError("config: " + path + " must be finite");
    return v;
}

int integer_at(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw InputError("config: " + path + " must be an integer");
    return j.get<int>();
}

Tensor parse_tensor(const json& tj, int dim, const std::string& path) {
    if (!tj.is_object()) throw InputError("config: " + path + " must be an object");
    const int order = integer_at(tj.contains("order") ? tj["order"] : json(), path + ".order");
    if (order < 2) throw InputError("config: " + path + ".order must be >= 2");

    const bool has_dense = tj.contains("dense");
    if (has_dense && (tj.contains("entries") || tj.contains("fill")))
        throw InputError("config: " + path + " mixes \"dense\" with \"fill\"/\"entries\"");

    if (has_dense) {
        const json& dj = tj["dense"];
        if (!dj.is_array()) throw InputError("config: " + path + ".dense must be an array");
        Vec entries;
        entries.reserve(dj.size());
        for (std::size_t i = 0; i < dj.size(); ++i)
            entries.push_back(number_at(dj[i], path + ".dense[" + std::to_string(i) + "]"));
        try {
            return Tensor::from_dense(order, dim, std::move(entries));
        } catch (const InputError& e) {
            throw InputError("config: " + path + ": " + e.what());
        }
    }

    const double fill = tj.contains("fill") ? number_at(tj["fill"], path + ".fill") : 0.0;
    Tensor t = Tensor::filled(order, dim, fill);
    if (!tj.contains("entries")) return t;

    const json& ej = tj["entries"];
    if (!ej.is_array()) throw InputError("config: " + path + ".entries must be an array");
    std::set<std::vector<int>> seen;
    for (std::size_t e = 0; e < ej.size(); ++e) {
        const std::string epath = path + ".entries[" + std::to_string(e) + "]";
        const json& item = ej[e];
        if (!item.is_object() || !item.contains("idx") || !item.contains("value"))
            throw InputError("config: " + epath + " must be an object with \"idx\" and \"value\"");
        const json& ij = item["idx"];
        if (!ij.is_array() || static_cast<int>(ij.size()) != order)
            throw InputError("config: " + epath + ".idx must be an array of " + std::to_string(order) + " indices");
        std::vector<int> idx;
        for (std::size_t d = 0; d < ij.size(); ++d) {
            const int v = integer_at(ij[d], epath + ".idx[" + std::to_string(d) + "]");
            if (v < 1 || v > dim)
                throw InputError("config: " + epath + ".idx[" + std::to_string(d) + "]: value " + std::to_string(v) +
                                 " out of range [1, " + std::to_string(dim) + "]");
            idx.push_back(v - 1);
        }
        if (!seen.insert(idx).second)
            throw InputError("config: " + epath + ": duplicate idx within one tensor (no silent accumulation)");
        t.at(idx) = number_at(item["value"], epath + ".value");
    }
    return t;
}

} // namespace

LoadedSystem parse_system_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw InputError("config: top-level value must be an object");

    if (!doc.contains("dim")) throw InputError("config: missing \"dim\"");
    const int dim = integer_at(doc["dim"], "dim");
    if (dim < 1) throw InputError("config: dim must be >= 1");

    LoadedSystem out{PolySystem(dim), doc.contains("name") ? doc["name"].get<std::string>() : ""};

    if (!doc.contains("tensors") || !doc["tensors"].is_array() || doc["tensors"].empty())
        throw InputError("config: \"tensors\" must be a non-empty array");
    const json& tensors = doc["tensors"];
    std::set<int> orders;
    for (std::size_t i = 0; i < tensors.size(); ++i) {
        const std::string path = "tensors[" + std::to_string(i) + "]";
        Tensor t = parse_tensor(tensors[i], dim, path);
        if (!orders.insert(t.order()).second)
            throw InputError("config: " + path + ": duplicate tensor order " + std::to_string(t.order()));
        out.system.set_tensor(std::move(t));
    }

    if (doc.contains("constant")) {
        const json& cj = doc["constant"];
        if (!cj.is_array() || static_cast<int>(cj.size()) != dim)
            throw InputError("config: \"constant\" must be an array of length " + std::to_string(dim));
        Vec b;
        for (std::size_t i = 0; i < cj.size(); ++i)
            b.push_back(number_at(cj[i], "constant[" + std::to_string(i) + "]"));
        out.system.set_constant(std::move(b));
    }
    return out;
}

LoadedSystem load_system_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_system_config(buf.str());
}

std::string serialize_system_config(const PolySystem& sys, const std::string& name) {
    json doc;
    if (!name.empty()) doc["name"] = name;
    doc["dim"] = sys.dim();
    doc["tensors"] = json::array();
    for (const auto& [order, t] : sys.tensors()) {
        json tj;
        tj["order"] = order;
        tj["dense"] = t.entries();
        doc["tensors"].push_back(std::move(tj));
    }
    if (sys.constant()) doc["constant"] = *sys.constant();
    return doc.dump(2) + "\n";
}

std::string trajectory_csv(const Trajectory& traj, const std::optional<Vec>& delta) {
    std::ostringstream os;
    const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
    os << "t";
    for (std::size_t j = 1; j <= n; ++j) os << ",x_" << j;
    if (delta) os << ",V";
    os << "\n";
    std::vector<double> v;
    if (delta) v = lyapunov_trace(traj, *delta);
    for (std::size_t t = 0; t < traj.states.size(); ++t) {
        os << t;
        for (double e : traj.states[t]) os << "," << fmt(e);
        if (delta) os << "," << fmt(v[t]);
        os << "\n";
    }
    return os.str();
}

std::string region_csv(const RegionSample& sample) {
    std::ostringstream os;
    const std::size_t n = sample.grid.empty() ? 0 : sample.grid.front().size();
    for (std::size_t j = 1; j <= n; ++j) os << "x0_" << j << ",";
    os << "label\n";
    for (std::size_t i = 0; i < sample.grid.size(); ++i) {
        for (double e : sample.grid[i]) os << fmt(e) << ",";
        os << to_string(sample.labels[i]) << "\n";
    }
    return os.str();
}

} // namespace hyperstab
