import pytest

from kantcheck.campaign import CampaignConfig, run_campaign


@pytest.fixture(scope="session")
def default_campaign(tmp_path_factory):
    """One run of the full default campaign, shared by the acceptance tests."""
    out = tmp_path_factory.mktemp("campaign_default")
    cfg = CampaignConfig(output_dir=str(out))
    summary = run_campaign(cfg)
    return cfg, summary


@pytest.fixture()
def small_config(tmp_path):
    """A fast campaign config exercising every suite on a reduced grid."""
    return CampaignConfig(
        dims=[2, 3],
        windows=[(1.0, 2.0)],
        p_grid=[-1.0, -0.5],
        q_grid=[-1.0, -0.5],
        r_grid=[-0.5],
        alpha_grid=[1.0],
        p_grid_theorem_1_1=[2.0],
        samples_per_cell=4,
        output_dir=str(tmp_path / "campaign"),
    )
