#include "ft/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace ft::io {

namespace {

using nlohmann::json;

constexpr char kMagic[4] = {'D', 'T', 'F', '1'};

void append_u64(std::vector<unsigned char>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}

std::uint64_t read_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

json tensor_to_json(const DenseTensor& t) { return json(encode_base64(tensor_to_bytes(t))); }

DenseTensor tensor_from_json(const json& j) {
    return tensor_from_bytes(decode_base64(j.get<std::string>()));
}

DenseTensor matrix_to_tensor(const Matrix& m) {
    std::vector<double> data(m.data(), m.data() + m.size());
    return DenseTensor({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())},
                       std::move(data));
}

Matrix tensor_to_matrix(const DenseTensor& t) {
    if (t.order() != 2) throw std::runtime_error("model file: expected an order-2 block");
    return Eigen::Map<const Matrix>(t.data(), static_cast<Eigen::Index>(t.extent(0)),
                                    static_cast<Eigen::Index>(t.extent(1)));
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return json::parse(in);
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace

std::vector<unsigned char> tensor_to_bytes(const DenseTensor& t) {
    static_assert(sizeof(double) == 8);
    std::vector<unsigned char> out;
    out.reserve(4 + 1 + 8 * t.order() + 8 * t.size());
    out.insert(out.end(), kMagic, kMagic + 4);
    if (t.order() > 255) throw std::invalid_argument("tensor order too large for DTF1");
    out.push_back(static_cast<unsigned char>(t.order()));
    for (std::size_t e : t.shape()) append_u64(out, e);
    const unsigned char* payload = reinterpret_cast<const unsigned char*>(t.data());
    out.insert(out.end(), payload, payload + 8 * t.size());
    return out;
}

DenseTensor tensor_from_bytes(const std::vector<unsigned char>& bytes) {
    if (bytes.size() < 5 || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw std::runtime_error("not a DTF1 tensor file");
    const std::size_t order = bytes[4];
    if (bytes.size() < 5 + 8 * order) throw std::runtime_error("DTF1: truncated header");
    std::vector<std::size_t> shape(order);
    std::size_t total = 1;
    for (std::size_t m = 0; m < order; ++m) {
        shape[m] = static_cast<std::size_t>(read_u64(bytes.data() + 5 + 8 * m));
        total *= shape[m];
    }
    const std::size_t offset = 5 + 8 * order;
    if (bytes.size() != offset + 8 * total) throw std::runtime_error("DTF1: payload length mismatch");
    std::vector<double> data(total);
    std::memcpy(data.data(), bytes.data() + offset, 8 * total);
    return DenseTensor(std::move(shape), std::move(data));
}

void write_tensor(const std::filesystem::path& path, const DenseTensor& t) {
    std::vector<unsigned char> bytes = tensor_to_bytes(t);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

DenseTensor read_tensor(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    return tensor_from_bytes(bytes);
}

std::string encode_base64(const std::vector<unsigned char>& bytes) {
    static const char* tbl = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 2 < bytes.size(); i += 3) {
        const unsigned v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
        out.push_back(tbl[(v >> 18) & 63]);
        out.push_back(tbl[(v >> 12) & 63]);
        out.push_back(tbl[(v >> 6) & 63]);
        out.push_back(tbl[v & 63]);
    }
    if (i + 1 == bytes.size()) {
        const unsigned v = bytes[i] << 16;
        out.push_back(tbl[(v >> 18) & 63]);
        out.push_back(tbl[(v >> 12) & 63]);
        out += "==";
    } else if (i + 2 == bytes.size()) {
        const unsigned v = (bytes[i] << 16) | (bytes[i + 1] << 8);
        out.push_back(tbl[(v >> 18) & 63]);
        out.push_back(tbl[(v >> 12) & 63]);
        out.push_back(tbl[(v >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

std::vector<unsigned char> decode_base64(const std::string& text) {
    auto value = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        if (c == '=') return -1;
        throw std::runtime_error("invalid base64 character");
    };
    if (text.size() % 4 != 0)
        throw std::runtime_error("base64: length must be a multiple of 4");
    std::vector<unsigned char> out;
    out.reserve(text.size() / 4 * 3);
    unsigned buf = 0;
    int bits = 0;
    bool padded = false;
    for (char c : text) {
        const int v = value(c);
        if (v < 0) {
            padded = true;
            continue;
        }
        if (padded) throw std::runtime_error("base64: data after padding");
        buf = (buf << 6) | static_cast<unsigned>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<unsigned char>((buf >> bits) & 0xff));
        }
    }
    return out;
}

void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
    json j;
    j["grid"] = manifest.grid;
    j["classes"] = json::array();
    for (const auto& c : manifest.classes)
        j["classes"].push_back({{"label", c.label}, {"samples", c.samples}});
    write_json_file(path, j);
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
    json j = read_json_file(path);
    DatasetManifest m;
    m.grid = j.at("grid").get<std::vector<double>>();
    for (const auto& c : j.at("classes")) {
        DatasetManifest::ClassEntry e;
        e.label = c.at("label").get<std::string>();
        e.samples = c.at("samples").get<std::vector<std::string>>();
        m.classes.push_back(std::move(e));
    }
    return m;
}

LabeledDataset load_dataset(const std::filesystem::path& manifest_path) {
    DatasetManifest m = read_manifest(manifest_path);
    const std::filesystem::path base = manifest_path.parent_path();
    LabeledDataset data;
    data.grid = DesignGrid(m.grid);
    int label = 0;
    for (const auto& c : m.classes) {
        for (const auto& rel : c.samples) {
            data.samples.push_back(read_tensor(base / rel));
            data.labels.push_back(label);
        }
        ++label;
    }
    data.validate();
    return data;
}

void write_ftd_model(const std::filesystem::path& path, const FtdModel& model) {
    json j;
    j["type"] = "ftd";
    j["lambda"] = model.lambda;
    j["kernel"] = {{"family", to_string(model.kernel.family)},
                   {"bandwidth", model.kernel.bandwidth}};
    j["design"] = model.design.points();
    j["trace"] = model.trace;
    j["core"] = tensor_to_json(model.core);
    j["factors"] = json::array();
    for (const auto& f : model.discrete_factors)
        j["factors"].push_back(tensor_to_json(matrix_to_tensor(f)));
    j["weights"] = tensor_to_json(matrix_to_tensor(model.weights));
    write_json_file(path, j);
}

FtdModel read_ftd_model(const std::filesystem::path& path) {
    json j = read_json_file(path);
    if (j.at("type") != "ftd") throw std::runtime_error("model file: unexpected type");
    FtdModel m;
    m.lambda = j.at("lambda").get<double>();
    m.kernel.family = kernel_family_from_string(j.at("kernel").at("family").get<std::string>());
    m.kernel.bandwidth = j.at("kernel").at("bandwidth").get<double>();
    m.design = DesignGrid(j.at("design").get<std::vector<double>>());
    m.trace = j.at("trace").get<std::vector<double>>();
    m.core = tensor_from_json(j.at("core"));
    for (const auto& f : j.at("factors"))
        m.discrete_factors.push_back(tensor_to_matrix(tensor_from_json(f)));
    m.weights = tensor_to_matrix(tensor_from_json(j.at("weights")));
    m.gram_cache = gram(m.kernel, m.design);
    return m;
}

void write_class_bases(const std::filesystem::path& path, const std::vector<ClassBasis>& bases) {
    json j;
    j["type"] = "class-bases";
    j["bases"] = json::array();
    for (const auto& b : bases) {
        json e;
        e["label"] = b.label;
        e["elements"] = json::array();
        for (const auto& d : b.elements) e["elements"].push_back(tensor_to_json(d));
        j["bases"].push_back(std::move(e));
    }
    write_json_file(path, j);
}

std::vector<ClassBasis> read_class_bases(const std::filesystem::path& path) {
    json j = read_json_file(path);
    if (j.at("type") != "class-bases") throw std::runtime_error("basis file: unexpected type");
    std::vector<ClassBasis> bases;
    for (const auto& e : j.at("bases")) {
        ClassBasis b;
        b.label = e.at("label").get<int>();
        for (const auto& d : e.at("elements")) b.elements.push_back(tensor_from_json(d));
        bases.push_back(std::move(b));
    }
    return bases;
}

KernelSpec kernel_from_json_text(const std::string& text) {
    json j = json::parse(text);
    KernelSpec spec;
    spec.family = kernel_family_from_string(j.at("family").get<std::string>());
    spec.bandwidth = j.at("bandwidth").get<double>();
    spec.validate();
    return spec;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // Trim to the shortest representation that round-trips.
    for (int prec = 1; prec < 17; ++prec) {
        char probe[64];
        std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(probe, "%lf", &back);
        if (back == v) return probe;
    }
    return buf;
}

}  // namespace ft::io
