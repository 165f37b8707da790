# Generated by Django 5.2.4 on 2026-10-19 09:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='AnalysisRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(choices=[('barcode', 'Barcode'), ('distances', 'Distance bounds'), ('validate', 'Filtration validation'), ('ledger', 'Product ledger'), ('stability', 'Stability check')], max_length=20)),
                ('status', models.CharField(choices=[('completed', 'Completed'), ('failed', 'Failed')], default='completed', max_length=10)),
                ('arguments', models.JSONField(default=dict, help_text='Options the command ran with')),
                ('summary', models.JSONField(default=dict, help_text='Headline numbers or the error message')),
                ('outputs', models.JSONField(default=list, help_text='Files written by the run')),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'verbose_name': 'Analysis Run',
                'verbose_name_plural': 'Analysis Runs',
                'ordering': ['-created_at'],
                'indexes': [models.Index(fields=['command', '-created_at'], name='runs_command_created_idx')],
            },
        ),
    ]
