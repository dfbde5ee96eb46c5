#ifndef HYPERRADON_VERSION_HPP
#define HYPERRADON_VERSION_HPP

namespace hyperradon {

inline constexpr const char* version = "0.1.0";

} // namespace hyperradon

#endif // HYPERRADON_VERSION_HPP
