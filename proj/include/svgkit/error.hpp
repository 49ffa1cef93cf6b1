#pragma once

#include <stdexcept>
#include <string>

namespace svgkit {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define SVGKIT_DEFINE_ERROR(Name, Base)                 \
    class Name : public Base {                          \
    public:                                             \
        using Base::Base;                               \
    }

// svg-core
SVGKIT_DEFINE_ERROR(ParseError, Error);
SVGKIT_DEFINE_ERROR(MalformedXml, ParseError);
SVGKIT_DEFINE_ERROR(NotSvg, ParseError);
SVGKIT_DEFINE_ERROR(PathSyntaxError, ParseError);
SVGKIT_DEFINE_ERROR(TransformSyntaxError, ParseError);
SVGKIT_DEFINE_ERROR(ColorSyntaxError, ParseError);

// normalizer
SVGKIT_DEFINE_ERROR(NoExtent, Error);
SVGKIT_DEFINE_ERROR(DegenerateExtent, Error);

// tokenizer
SVGKIT_DEFINE_ERROR(UnknownId, Error);
SVGKIT_DEFINE_ERROR(EmptyCorpus, Error);
SVGKIT_DEFINE_ERROR(EmptyDecomposition, Error);
SVGKIT_DEFINE_ERROR(TokenizerLoadError, Error);

// edit-synth
SVGKIT_DEFINE_ERROR(EditError, Error);
SVGKIT_DEFINE_ERROR(ColorNotFound, EditError);
SVGKIT_DEFINE_ERROR(NoShapes, EditError);
SVGKIT_DEFINE_ERROR(InvalidEditOp, EditError);

// raster-metrics
SVGKIT_DEFINE_ERROR(RenderError, Error);
SVGKIT_DEFINE_ERROR(DimensionMismatch, Error);
SVGKIT_DEFINE_ERROR(TooSmall, Error);
SVGKIT_DEFINE_ERROR(LengthMismatch, Error);
SVGKIT_DEFINE_ERROR(ImageIoError, Error);

// bench-harness
SVGKIT_DEFINE_ERROR(EmptyManifest, Error);
SVGKIT_DEFINE_ERROR(ManifestSchemaError, Error);
SVGKIT_DEFINE_ERROR(FrameCountMismatch, Error);
SVGKIT_DEFINE_ERROR(DuplicateKey, Error);

#undef SVGKIT_DEFINE_ERROR

} // namespace svgkit
