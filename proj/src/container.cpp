#include "urt/container.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace urt {

namespace {

using nlohmann::json;

[[noreturn]] void fail(FormatErrorKind kind, const std::string& field, const std::string& message) {
    throw FormatError(kind, field, message);
}

std::string kind_name(FormatErrorKind kind) {
    switch (kind) {
    case FormatErrorKind::io: return "io error";
    case FormatErrorKind::magic_mismatch: return "magic mismatch";
    case FormatErrorKind::malformed_header: return "malformed header";
    case FormatErrorKind::truncated_payload: return "truncated payload";
    case FormatErrorKind::type_mismatch: return "type mismatch";
    }
    return "format error";
}

void put_geometry(json& h, const GridGeometry& g) {
    h["nx"] = g.nx;
    h["ny"] = g.ny;
    h["x_min"] = g.x_min;
    h["y_min"] = g.y_min;
    h["dx"] = g.dx;
    h["dy"] = g.dy;
}

template <typename T>
T field_as(const json& h, const char* name) {
    if (!h.contains(name))
        fail(FormatErrorKind::malformed_header, name, "missing header field");
    try {
        return h.at(name).get<T>();
    } catch (const json::exception&) {
        fail(FormatErrorKind::malformed_header, name, "header field has the wrong type");
    }
}

GridGeometry get_geometry(const json& h) {
    GridGeometry g;
    g.nx = field_as<std::size_t>(h, "nx");
    g.ny = field_as<std::size_t>(h, "ny");
    g.x_min = field_as<double>(h, "x_min");
    g.y_min = field_as<double>(h, "y_min");
    g.dx = field_as<double>(h, "dx");
    g.dy = field_as<double>(h, "dy");
    try {
        g.validate();
    } catch (const GeometryError& e) {
        fail(FormatErrorKind::malformed_header, "nx", e.what());
    }
    return g;
}

void check_shape(const json& h, const std::vector<std::size_t>& expected) {
    const auto shape = field_as<std::vector<std::size_t>>(h, "shape");
    if (shape != expected)
        fail(FormatErrorKind::malformed_header, "shape", "shape disagrees with geometry fields");
}

void write_samples(std::ostream& out, std::span<const cplx> values) {
    std::vector<unsigned char> buf(values.size() * 16);
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double parts[2] = {values[k].real(), values[k].imag()};
        for (int p = 0; p < 2; ++p) {
            auto bits = std::bit_cast<std::uint64_t>(parts[p]);
            for (int b = 0; b < 8; ++b)
                buf[k * 16 + static_cast<std::size_t>(p) * 8 + static_cast<std::size_t>(b)] =
                    static_cast<unsigned char>((bits >> (8 * b)) & 0xffu);
        }
    }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

std::vector<cplx> read_samples(std::istream& in, std::size_t count) {
    std::vector<unsigned char> buf(count * 16);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (static_cast<std::size_t>(in.gcount()) != buf.size())
        fail(FormatErrorKind::truncated_payload, "payload",
             "expected " + std::to_string(buf.size()) + " payload bytes, got " + std::to_string(in.gcount()));
    std::vector<cplx> values(count);
    for (std::size_t k = 0; k < count; ++k) {
        double parts[2];
        for (int p = 0; p < 2; ++p) {
            std::uint64_t bits = 0;
            for (int b = 0; b < 8; ++b)
                bits |= static_cast<std::uint64_t>(buf[k * 16 + static_cast<std::size_t>(p) * 8 + static_cast<std::size_t>(b)])
                        << (8 * b);
            parts[p] = std::bit_cast<double>(bits);
        }
        values[k] = {parts[0], parts[1]};
    }
    return values;
}

void check_real_flag(const json& h, std::span<const cplx> values) {
    if (!field_as<bool>(h, "real_valued"))
        return;
    if (std::any_of(values.begin(), values.end(), [](cplx v) { return v.imag() != 0.0; }))
        fail(FormatErrorKind::malformed_header, "real_valued", "flag set but payload has imaginary parts");
}

std::vector<ImageGrid2D> split_slices(const GridGeometry& g, const std::vector<cplx>& all, std::size_t count) {
    std::vector<ImageGrid2D> out;
    out.reserve(count);
    const std::size_t per = g.size();
    for (std::size_t n = 0; n < count; ++n)
        out.emplace_back(g, std::vector<cplx>(all.begin() + static_cast<std::ptrdiff_t>(n * per),
                                              all.begin() + static_cast<std::ptrdiff_t>((n + 1) * per)));
    return out;
}

struct HeaderWriter {
    std::ostream& out;

    void emit(const json& header, const auto& payload_writer) {
        out << header.dump() << '\n';
        payload_writer();
    }

    void operator()(const ImageGrid2D& img) {
        json h = base("image");
        put_geometry(h, img.geometry());
        h["shape"] = {img.ny(), img.nx()};
        h["real_valued"] = img.real_valued();
        emit(h, [&] { write_samples(out, img.values()); });
    }

    void operator()(const Sinogram& s) {
        json h = base("sinogram");
        h["tau_min"] = s.taus().tau_min;
        h["d_tau"] = s.taus().d_tau;
        h["n_tau"] = s.taus().n_tau;
        h["phi_min"] = s.angles().phi_min;
        h["phi_max"] = s.angles().phi_max;
        h["n_phi"] = s.angles().n_phi;
        h["shape"] = {s.n_phi(), s.n_tau()};
        h["real_valued"] = std::all_of(s.values().begin(), s.values().end(), [](cplx v) { return v.imag() == 0.0; });
        emit(h, [&] { write_samples(out, s.values()); });
    }

    void operator()(const VolumeStack& v) {
        json h = base("volume");
        put_geometry(h, v.geometry());
        h["shape"] = {v.size(), v.geometry().ny, v.geometry().nx};
        h["x3_positions"] = std::vector<double>(v.x3_positions().begin(), v.x3_positions().end());
        h["real_valued"] = std::all_of(v.slices().begin(), v.slices().end(), [](const auto& s) { return s.real_valued(); });
        emit(h, [&] {
            for (const auto& s : v.slices())
                write_samples(out, s.values());
        });
    }

    void operator()(const HybridField& f) {
        json h = base("hybrid");
        put_geometry(h, f.geometry());
        h["shape"] = {f.size(), f.geometry().ny, f.geometry().nx};
        h["k_values"] = std::vector<double>(f.k_values().begin(), f.k_values().end());
        h["provenance"] = f.provenance() == HybridProvenance::series ? "series" : "continuous";
        h["real_valued"] = std::all_of(f.fields().begin(), f.fields().end(), [](const auto& s) { return s.real_valued(); });
        emit(h, [&] {
            for (const auto& s : f.fields())
                write_samples(out, s.values());
        });
    }

    static json base(const char* type) {
        json h;
        h["magic"] = container_magic;
        h["type"] = type;
        h["dtype"] = "c128";
        return h;
    }
};

} // namespace

FormatError::FormatError(FormatErrorKind kind, std::string field, const std::string& message)
    : std::runtime_error(kind_name(kind) + " [" + field + "]: " + message), kind_(kind), field_(std::move(field)) {}

void write_container(std::ostream& out, const ContainerObject& object) {
    std::visit(HeaderWriter{out}, object);
    if (!out)
        fail(FormatErrorKind::io, "payload", "write failed");
}

ContainerObject read_container(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        fail(FormatErrorKind::malformed_header, "header", "missing header line");
    json h;
    try {
        h = json::parse(line);
    } catch (const json::parse_error&) {
        // A non-JSON first line is almost always a foreign file; report it by its magic.
        if (line.find(container_magic) == std::string::npos)
            fail(FormatErrorKind::magic_mismatch, "magic", "not an URDN1 container");
        fail(FormatErrorKind::malformed_header, "header", "header line is not a key-value object");
    }
    if (!h.is_object())
        fail(FormatErrorKind::malformed_header, "header", "header line is not a key-value object");
    if (!h.contains("magic") || !h["magic"].is_string() || h["magic"].get<std::string>() != container_magic)
        fail(FormatErrorKind::magic_mismatch, "magic", "expected \"URDN1\"");
    if (field_as<std::string>(h, "dtype") != "c128")
        fail(FormatErrorKind::malformed_header, "dtype", "only c128 is supported");
    const auto type = field_as<std::string>(h, "type");

    if (type == "image") {
        const auto g = get_geometry(h);
        check_shape(h, {g.ny, g.nx});
        auto values = read_samples(in, g.size());
        check_real_flag(h, values);
        return ImageGrid2D(g, std::move(values));
    }
    if (type == "sinogram") {
        TauGrid taus{field_as<double>(h, "tau_min"), field_as<double>(h, "d_tau"), field_as<std::size_t>(h, "n_tau")};
        AngularRange angles{field_as<double>(h, "phi_min"), field_as<double>(h, "phi_max"),
                            field_as<std::size_t>(h, "n_phi")};
        try {
            taus.validate();
        } catch (const GeometryError& e) {
            fail(FormatErrorKind::malformed_header, "d_tau", e.what());
        }
        try {
            angles.validate();
        } catch (const GeometryError& e) {
            fail(FormatErrorKind::malformed_header, "phi_max", e.what());
        }
        check_shape(h, {angles.n_phi, taus.n_tau});
        auto values = read_samples(in, taus.n_tau * angles.n_phi);
        check_real_flag(h, values);
        return Sinogram(taus, angles, std::move(values));
    }
    if (type == "volume" || type == "hybrid") {
        const auto g = get_geometry(h);
        const char* axis_field = type == "volume" ? "x3_positions" : "k_values";
        auto axis = field_as<std::vector<double>>(h, axis_field);
        if (axis.empty())
            fail(FormatErrorKind::malformed_header, axis_field, "needs at least one entry");
        check_shape(h, {axis.size(), g.ny, g.nx});
        const auto all = read_samples(in, axis.size() * g.size());
        check_real_flag(h, all);
        auto slices = split_slices(g, all, axis.size());
        try {
            if (type == "volume")
                return VolumeStack(std::move(axis), std::move(slices));
            const auto prov = field_as<std::string>(h, "provenance");
            if (prov != "series" && prov != "continuous")
                fail(FormatErrorKind::malformed_header, "provenance", "expected series or continuous");
            return HybridField(std::move(axis), std::move(slices),
                               prov == "series" ? HybridProvenance::series : HybridProvenance::continuous);
        } catch (const GeometryError& e) {
            fail(FormatErrorKind::malformed_header, axis_field, e.what());
        }
    }
    fail(FormatErrorKind::malformed_header, "type", "unknown container type '" + type + "'");
}

void write_container(const std::filesystem::path& path, const ContainerObject& object) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        fail(FormatErrorKind::io, "path", "cannot open " + path.string() + " for writing");
    write_container(out, object);
}

ContainerObject read_container(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(FormatErrorKind::io, "path", "cannot open " + path.string());
    return read_container(in);
}

namespace {
template <typename T>
T read_typed(const std::filesystem::path& path, const char* name) {
    auto obj = read_container(path);
    if (auto* p = std::get_if<T>(&obj))
        return std::move(*p);
    fail(FormatErrorKind::type_mismatch, "type", path.string() + " does not hold a " + name);
}
} // namespace

ImageGrid2D read_image(const std::filesystem::path& path) { return read_typed<ImageGrid2D>(path, "image"); }
Sinogram read_sinogram(const std::filesystem::path& path) { return read_typed<Sinogram>(path, "sinogram"); }
VolumeStack read_volume(const std::filesystem::path& path) { return read_typed<VolumeStack>(path, "volume"); }
HybridField read_hybrid(const std::filesystem::path& path) { return read_typed<HybridField>(path, "hybrid"); }

} // namespace urt
