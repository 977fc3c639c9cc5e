"""
Tests for the event bus.
"""

from isac_apm_emulator.core.event_bus import EventBus


class TestEventBus:
    """Tests for EventBus."""

    def test_publish_reaches_subscribers_in_order(self):
        """Test that handlers run in subscription order with the published data."""
        bus = EventBus()
        seen = []
        bus.subscribe("progress", lambda done: seen.append(("a", done)))
        bus.subscribe("progress", lambda done: seen.append(("b", done)))

        assert bus.publish("progress", done=3) == 2
        assert seen == [("a", 3), ("b", 3)]

    def test_failing_handler_is_skipped(self):
        """Test that a raising handler does not stop the others."""
        bus = EventBus()
        seen = []

        def broken(**_):
            raise RuntimeError("boom")

        bus.subscribe("stage", broken)
        bus.subscribe("stage", lambda stage: seen.append(stage))

        assert bus.publish("stage", stage="estimate") == 1
        assert seen == ["estimate"]

    def test_listening_unsubscribes(self):
        """Test that the context manager removes its handler on exit."""
        bus = EventBus()
        seen = []

        def handler(label):
            seen.append(label)

        with bus.listening("done", handler):
            assert bus.has_subscribers("done")
            bus.publish("done", label="t1")
        bus.publish("done", label="t2")

        assert seen == ["t1"]
        assert not bus.has_subscribers("done")

    def test_unsubscribe_unknown(self):
        """Test that removing a handler that was never added reports False."""
        assert EventBus().unsubscribe("done", print) is False
