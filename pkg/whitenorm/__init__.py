from .WhiteNorm import WhiteNorm
