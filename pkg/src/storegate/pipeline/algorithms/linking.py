"""Links from a selected collection back into its source."""

from ...edm import TrackCollection
from ...links import ElementLinkVector
from .base import AlgContext, Algorithm


class LinkBuilder(Algorithm):
    """Records one element link per selected track, pointing into the source collection."""

    kind = "LinkBuilder"
    description = "Link selected tracks back to the source collection"
    parameters = {
        "source": "key of the source TrackCollection (required)",
        "selected": "key of the selected TrackCollection (required)",
        "key": "output key (default: instance name)",
    }

    def configure(self) -> None:
        self.source = self.param_str("source", required=True)
        self.selected = self.param_str("selected", required=True)
        self.key = self.param_str("key")

    def execute(self, ctx: AlgContext) -> None:
        selected = ctx.retrieve(TrackCollection, self.selected)
        links = ElementLinkVector(
            ctx.make_element_link(TrackCollection, self.source, track) for track in selected
        )
        ctx.record(links, self.key)
