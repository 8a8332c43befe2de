# Generated by Django 5.2.7 on 2026-10-18 09:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='IndexBuild',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('index_path', models.CharField(max_length=500)),
                ('mode', models.CharField(choices=[('standard', 'Standard'), ('compact', 'Compact')], default='standard', max_length=20)),
                ('text_length', models.PositiveIntegerField()),
                ('total_words', models.BigIntegerField()),
                ('max_probes', models.PositiveIntegerField(blank=True, null=True)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ['-created_at'],
            },
        ),
    ]
