#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>

#include "urt/grid.hpp"

namespace urt {

/// URDN1 container: one JSON header line, then little-endian (re, im) double pairs.
///
/// The header carries magic="URDN1", type in {image, sinogram, volume, hybrid}, dtype="c128",
/// the payload shape (slowest axis first), every geometry field of the stored object and a
/// real_valued flag. Samples follow row-major with x (or tau) fastest.
inline constexpr const char* container_magic = "URDN1";

enum class FormatErrorKind { io, magic_mismatch, malformed_header, truncated_payload, type_mismatch };

class FormatError : public std::runtime_error {
public:
    FormatError(FormatErrorKind kind, std::string field, const std::string& message);

    [[nodiscard]] FormatErrorKind kind() const { return kind_; }
    /// Header field (or "payload") the error refers to.
    [[nodiscard]] const std::string& field() const { return field_; }

private:
    FormatErrorKind kind_;
    std::string field_;
};

using ContainerObject = std::variant<ImageGrid2D, Sinogram, VolumeStack, HybridField>;

void write_container(std::ostream& out, const ContainerObject& object);
ContainerObject read_container(std::istream& in);

void write_container(const std::filesystem::path& path, const ContainerObject& object);
ContainerObject read_container(const std::filesystem::path& path);

/// Typed readers; a container of another type raises FormatErrorKind::type_mismatch.
ImageGrid2D read_image(const std::filesystem::path& path);
Sinogram read_sinogram(const std::filesystem::path& path);
VolumeStack read_volume(const std::filesystem::path& path);
HybridField read_hybrid(const std::filesystem::path& path);

} // namespace urt
