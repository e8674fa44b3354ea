#pragma once

#include <stdexcept>
#include <string>

namespace illu {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// image-core / font
struct MissingGlyph : Error { using Error::Error; };
struct UnreachableScale : Error { using Error::Error; };
struct ZeroDimension : Error { using Error::Error; };
struct ContentLargerThanCanvas : Error { using Error::Error; };
struct BadImageFile : Error { using Error::Error; };

// spectral / perception
struct InvalidLambda : Error { using Error::Error; };
struct NonMonotoneBoundaries : Error { using Error::Error; };
struct KTooSmall : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };

// illugen
struct InvalidParams : Error { using Error::Error; };
struct MaskMismatch : Error { using Error::Error; };
struct IdenticalParams : Error { using Error::Error; };
struct MissingTruth : Error { using Error::Error; };
struct UnreadableImage : Error { using Error::Error; };

// evalkit
struct UnknownKind : Error { using Error::Error; };
struct JudgeUnavailable : Error { using Error::Error; };
struct MalformedJudgeOutput : Error { using Error::Error; };
struct UnknownSample : Error { using Error::Error; };

// mllm-client
struct AuthFailed : Error { using Error::Error; };
struct RateLimited : Error { using Error::Error; };
struct RequestTimeout : Error { using Error::Error; };
struct ProtocolError : Error { using Error::Error; };

// cli surface: these map directly onto process exit codes
struct ConfigError : Error { using Error::Error; };   // exit 2
struct DataError : Error { using Error::Error; };     // exit 3
struct EndpointError : Error { using Error::Error; }; // exit 4

} // namespace illu
