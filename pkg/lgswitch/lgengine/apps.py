from django.apps import AppConfig


class LGEngineConfig(AppConfig):
    name = "lgswitch.lgengine"
