#pragma once

#include "shafer/asin_series.hpp"
#include "shafer/certificate_json.hpp"
#include "shafer/checker.hpp"
#include "shafer/enclosures.hpp"
#include "shafer/errors.hpp"
#include "shafer/functions.hpp"
#include "shafer/interval.hpp"
#include "shafer/lambda_method.hpp"
#include "shafer/optimizer.hpp"
#include "shafer/verifier.hpp"
