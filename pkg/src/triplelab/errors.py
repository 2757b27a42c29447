# Copyright 2026, The triple-lab authors. All rights reserved.
#
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


class TripleLabError(Exception):
    pass


# Numeric kernel and decompositions


class NumericError(TripleLabError):
    pass


class NonHermitianInput(NumericError):
    pass


class DimensionMismatch(NumericError):
    pass


class RankDeficient(NumericError):
    pass


class SpectrumViolation(NumericError):
    pass


class DecompositionFailed(NumericError):
    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = dict(residuals or {})


class NegativeRadicand(NumericError):
    pass


# Factor membership


class MembershipError(TripleLabError):
    pass


class ShapeMismatch(MembershipError):
    pass


class NotInSubtriple(MembershipError):
    pass


class DimensionTooSmall(MembershipError):
    pass


class InvalidSummand(MembershipError):
    pass


# Tripotents


class TripotentError(TripleLabError):
    pass


class NotTripotent(TripotentError):
    pass


class NotMinimal(TripotentError):
    pass


class NotAProjection(TripotentError):
    pass


class NotCollinear(TripotentError):
    pass


class NotUnitCoefficients(TripotentError):
    pass


# Maps and preserver checks


class MapError(TripleLabError):
    pass


class InvalidPrimitive(MapError):
    pass


class NotTripotentImage(MapError):
    pass


class InconsistentSamples(MapError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class InconsistentTag(MapError):
    pass


class NotAnIsometry(MapError):
    pass


class ConfigError(TripleLabError):
    pass
