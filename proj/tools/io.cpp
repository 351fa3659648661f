#include "io.hpp"

#include "cocycle/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cocycle::io {

namespace {

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
        out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',')
        out.push_back("");
    return out;
}

double parse_number(const std::string& cell, const std::string& where)
{
    if (cell.empty())
        reject(where + ": empty field");
    char* end = nullptr;
    double v = std::strtod(cell.c_str(), &end);
    if (end != cell.c_str() + cell.size())
        reject(where + ": '" + cell + "' is not a number");
    if (!std::isfinite(v))
        reject(where + ": non-finite value");
    return v;
}

void dump_into(const Json& j, std::string& out, int depth)
{
    const std::string pad(2 * (depth + 1), ' ');
    const std::string close(2 * depth, ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first)
                out += ",\n";
            first = false;
            out += pad + Json(it.key()).dump() + ": ";
            dump_into(it.value(), out, depth + 1);
        }
        out += "\n" + close + "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        bool scalars = true;
        for (const auto& x : j)
            scalars = scalars && !x.is_structured();
        if (scalars) {
            out += "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i)
                    out += ", ";
                dump_into(j[i], out, depth + 1);
            }
            out += "]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i)
                out += ",\n";
            out += pad;
            dump_into(j[i], out, depth + 1);
        }
        out += "\n" + close + "]";
        return;
    }
    case Json::value_t::number_float:
        out += format_number(j.get<double>());
        return;
    default:
        out += j.dump();
        return;
    }
}

} // namespace

CsvPath read_csv(std::istream& in, const std::string& source)
{
    CsvPath out;
    std::string line;
    std::size_t lineno = 0;
    int d = -1;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty())
            continue;
        auto cells = split(t);
        const std::string where = source + ":" + std::to_string(lineno);
        if (d < 0) {
            if (cells.size() < 2 || cells[0] != "t")
                reject(where + ": header must be t,x1,...,xd");
            for (std::size_t i = 1; i < cells.size(); ++i)
                if (cells[i] != "x" + std::to_string(i))
                    reject(where + ": header column " + std::to_string(i + 1) + " must be x" + std::to_string(i));
            d = static_cast<int>(cells.size()) - 1;
            continue;
        }
        if (static_cast<int>(cells.size()) != d + 1)
            reject(where + ": expected " + std::to_string(d + 1) + " fields, got " + std::to_string(cells.size()));
        double time = parse_number(cells[0], where);
        if (!out.times.empty() && !(time > out.times.back()))
            reject(where + ": times must be strictly increasing");
        std::vector<double> x(d);
        for (int i = 0; i < d; ++i)
            x[i] = parse_number(cells[i + 1], where);
        out.times.push_back(time);
        out.points.push_back(std::move(x));
    }
    if (d < 0)
        reject(source + ": missing header");
    if (out.times.empty())
        reject(source + ": no samples");
    return out;
}

CsvPath read_csv_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        reject(path + ": cannot open");
    return read_csv(in, path);
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        reject(path + ": cannot open");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        reject(path + ": " + e.what());
    }
}

Json tensor_to_json(const GradedTensor& a)
{
    const HopfSystem& sys = a.system();
    Json j;
    j["system"] = to_string(sys.kind());
    j["d"] = sys.d();
    j["n"] = sys.n();
    Json coeffs = Json::array();
    for (std::size_t i = 0; i < a.size(); ++i)
        coeffs.push_back(Json{{"index", sys.label(i)}, {"value", a[i]}});
    j["coeffs"] = std::move(coeffs);
    return j;
}

namespace {

SystemPtr system_from_json(const Json& j)
{
    try {
        Kind kind = kind_from_string(j.at("system").get<std::string>());
        int d = j.at("d").get<int>();
        int n = j.at("n").get<int>();
        if (d < 1 || n < 0 || n > 12)
            reject("system dimensions out of range");
        return HopfSystem::get(kind, d, n);
    } catch (const Json::exception& e) {
        reject(std::string("bad system description: ") + e.what());
    }
}

double json_number(const Json& v, const std::string& what)
{
    if (!v.is_number())
        reject(what + " must be a number");
    double x = v.get<double>();
    if (!std::isfinite(x))
        reject(what + " must be finite");
    return x;
}

void flatten(const Json& v, std::vector<double>& out, const std::string& what)
{
    if (v.is_array()) {
        for (const auto& x : v)
            flatten(x, out, what);
        return;
    }
    out.push_back(json_number(v, what));
}

} // namespace

GradedTensor tensor_from_json(const Json& j)
{
    auto sys = system_from_json(j);
    GradedTensor a(sys);
    try {
        for (const auto& c : j.at("coeffs"))
            a[sys->index_of_label(c.at("index").get<std::string>())] = json_number(c.at("value"), "coefficient");
    } catch (const Json::exception& e) {
        reject(std::string("bad tensor: ") + e.what());
    }
    return a;
}

Json path_to_json(const SampledGroupPath& g)
{
    const HopfSystem& sys = g.system();
    Json j;
    j["system"] = to_string(sys.kind());
    j["d"] = sys.d();
    j["n"] = sys.n();
    Json labels = Json::array();
    for (std::size_t i = 0; i < sys.size(); ++i)
        labels.push_back(sys.label(i));
    j["labels"] = std::move(labels);
    j["times"] = g.times();
    Json values = Json::array();
    for (const auto& v : g.values())
        values.push_back(v.coeffs());
    j["values"] = std::move(values);
    return j;
}

SampledGroupPath path_from_json(const Json& j)
{
    auto sys = system_from_json(j);
    try {
        std::vector<double> times;
        for (const auto& t : j.at("times"))
            times.push_back(json_number(t, "time"));
        std::vector<GradedTensor> values;
        std::size_t row = 0;
        for (const auto& v : j.at("values")) {
            std::vector<double> c;
            flatten(v, c, "path value");
            if (c.size() != sys->size())
                reject("path value " + std::to_string(row) + " has " + std::to_string(c.size()) +
                       " coefficients, expected " + std::to_string(sys->size()));
            values.emplace_back(sys, std::move(c));
            ++row;
        }
        if (j.contains("labels")) {
            const auto& labels = j.at("labels");
            if (labels.size() != sys->size())
                reject("label list does not match the system");
            for (std::size_t i = 0; i < sys->size(); ++i)
                if (labels[i].get<std::string>() != sys->label(i))
                    reject("label " + std::to_string(i) + " is out of canonical order");
        }
        return SampledGroupPath(std::move(times), std::move(values));
    } catch (const Json::exception& e) {
        reject(std::string("bad path: ") + e.what());
    }
}

Polynomial polynomial_from_json(const Json& j, bool one_form)
{
    try {
        int d = j.at("d").get<int>();
        int target = j.at("target_dim").get<int>();
        if (d < 1 || target < 1)
            reject("polynomial dimensions must be positive");
        const auto& ders = j.at("derivatives");
        if (!ders.is_array() || ders.empty())
            reject("derivatives must be a non-empty array");
        if (j.contains("degree") && j.at("degree").get<int>() != static_cast<int>(ders.size()) - 1)
            reject("degree does not match the number of derivative arrays");
        std::vector<std::vector<double>> coeffs;
        for (const auto& a : ders) {
            std::vector<double> c;
            flatten(a, c, "derivative coefficient");
            coeffs.push_back(std::move(c));
        }
        Polynomial p(d, one_form ? target * d : target, std::move(coeffs));
        if (p.symmetry_defect() > 1e-12)
            reject("derivative arrays are not symmetric in their slots");
        return p;
    } catch (const Json::exception& e) {
        reject(std::string("bad polynomial: ") + e.what());
    }
}

std::string format_number(double v)
{
    if (!std::isfinite(v))
        throw Error(ErrorKind::overflow, "non-finite number in output");
    if (v == 0.0)
        return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    if (s.find_first_of(".eE") == std::string::npos)
        s += ".0";
    return s;
}

std::string dump(const Json& j)
{
    std::string out;
    dump_into(j, out, 0);
    out += "\n";
    return out;
}

} // namespace cocycle::io
