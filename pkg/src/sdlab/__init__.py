"""Zero-dilation indices and numerical-range geometry for complex matrices."""
from .companion import GeneralizedCompanionSpec
from .dilation import ZdiResult, zdi
from .kms import KmsSpec
from .linalg import Inertia, inertia

__all__ = ["GeneralizedCompanionSpec", "Inertia", "KmsSpec", "ZdiResult", "inertia", "zdi"]
__version__ = "0.1.0"
