from django.db import models


class IndexBuild(models.Model):
    MODE_CHOICES = [
        ('standard', 'Standard'),
        ('compact', 'Compact'),
    ]

    index_path = models.CharField(max_length=500)
    mode = models.CharField(max_length=20, choices=MODE_CHOICES, default='standard')
    text_length = models.PositiveIntegerField()
    total_words = models.BigIntegerField()
    max_probes = models.PositiveIntegerField(null=True, blank=True)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['-created_at']

    def __str__(self):
        return f"{self.index_path} ({self.mode}, n={self.text_length})"
