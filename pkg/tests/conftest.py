import pytest

from eqdose import TissueKind, TissueLibrary, TissueParams


@pytest.fixture(scope="session")
def library():
    return TissueLibrary.default()


@pytest.fixture(scope="session")
def cord(library):
    return library.get("spinal cord")


@pytest.fixture(scope="session")
def make_oar():
    def _make(name="test oar", alpha_beta=2.0, alpha=0.35, mu=0.46, d_rec=0.0, **kw):
        return TissueParams(
            name=name, kind=TissueKind.OAR,
            alpha_beta=alpha_beta, alpha=alpha, mu=mu, d_rec=d_rec, **kw,
        )

    return _make


@pytest.fixture(scope="session")
def make_target():
    def _make(name="test target", alpha_beta=10.0, alpha=0.35, mu=0.46,
              t_pot=5.0, t_k=28.0, **kw):
        return TissueParams(
            name=name, kind=TissueKind.TARGET,
            alpha_beta=alpha_beta, alpha=alpha, mu=mu, t_pot=t_pot, t_k=t_k, **kw,
        )

    return _make
