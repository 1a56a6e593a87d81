#pragma once

#include "monoshift/bigint.hpp"
#include "monoshift/cayley.hpp"
#include "monoshift/combinatorics.hpp"
#include "monoshift/degree.hpp"
#include "monoshift/errors.hpp"
#include "monoshift/followers.hpp"
#include "monoshift/json_io.hpp"
#include "monoshift/perron.hpp"
#include "monoshift/presentation.hpp"
#include "monoshift/sft.hpp"
#include "monoshift/spectrum.hpp"
